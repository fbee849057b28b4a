#include "ptsrc/reference.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptsrc::exact {

namespace {

constexpr mpfr_prec_t kPrecision = 256;

class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, kPrecision); }
  explicit Mpfr(double x) : Mpfr() { mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit Mpfr(const ExactRational& q) : Mpfr() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  explicit Mpfr(const BigInt& z) : Mpfr() { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

}  // namespace

double to_double(const ExactRational& q) {
  Mpfr x(q);
  return x.to_double();
}

double log_value(const ExactRational& q) {
  if (q <= 0) throw std::domain_error("log of a non-positive rational");
  Mpfr x(q);
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  return x.to_double();
}

double binomial_coefficient_log_reference(std::uint64_t a, std::int64_t b) {
  const BigInt c = binom_exact(a, b);
  if (c == 0) return -std::numeric_limits<double>::infinity();
  Mpfr x(c);
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  return x.to_double();
}

double poisson_log_pmf_reference(std::uint64_t n, const ExactRational& mu) {
  if (mu < 0) throw std::domain_error("negative Poisson mean");
  if (mu == 0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  Mpfr log_mu(mu);
  mpfr_log(log_mu.get(), log_mu.get(), MPFR_RNDN);
  Mpfr result;
  mpfr_mul_ui(result.get(), log_mu.get(), n, MPFR_RNDN);
  Mpfr m(mu);
  mpfr_sub(result.get(), result.get(), m.get(), MPFR_RNDN);
  Mpfr lfact;
  mpfr_set_ui(lfact.get(), n + 1, MPFR_RNDN);
  mpfr_lngamma(lfact.get(), lfact.get(), MPFR_RNDN);
  mpfr_sub(result.get(), result.get(), lfact.get(), MPFR_RNDN);
  return result.to_double();
}

double normal_tail_log_reference(double s) {
  Mpfr x(s);
  Mpfr root2;
  mpfr_set_ui(root2.get(), 2, MPFR_RNDN);
  mpfr_sqrt(root2.get(), root2.get(), MPFR_RNDN);
  mpfr_div(x.get(), x.get(), root2.get(), MPFR_RNDN);
  mpfr_erfc(x.get(), x.get(), MPFR_RNDN);
  mpfr_div_ui(x.get(), x.get(), 2, MPFR_RNDN);
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  return x.to_double();
}

double sigma_reference(double log_p) {
  if (log_p >= -std::log(2.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (normal_tail_log_reference(hi) > log_p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_tail_log_reference(mid) > log_p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ptsrc::exact
