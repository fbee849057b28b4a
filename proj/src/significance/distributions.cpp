#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptsrc/numerics.hpp"
#include "ptsrc/significance.hpp"

namespace ptsrc::sig {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

RegionGeometry::RegionGeometry(double a_src, double a_bak) noexcept
    : a_src_(a_src), a_bak_(a_bak), f_(a_src / (a_src + a_bak)), alpha_(a_src / a_bak) {}

RegionGeometry RegionGeometry::from_areas(double a_src, double a_bak) {
  if (!(std::isfinite(a_src) && a_src > 0.0)) {
    throw std::invalid_argument("source area must be finite and positive");
  }
  if (!(std::isfinite(a_bak) && a_bak > 0.0)) {
    throw std::invalid_argument("background area must be finite and positive");
  }
  RegionGeometry g(a_src, a_bak);
  if (!(g.f_ > 0.0 && g.f_ < 1.0) || !std::isfinite(g.alpha_)) {
    throw std::invalid_argument("area ratio leaves no usable source or background fraction");
  }
  return g;
}

RegionGeometry RegionGeometry::from_fraction(double f) {
  if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("f must lie in (0, 1)");
  RegionGeometry g(f, 1.0 - f);
  g.f_ = f;
  g.alpha_ = f / (1.0 - f);
  return g;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::BinomialTail:
      return "BinomialTail";
    case Method::BayesSeries:
      return "BayesSeries";
    case Method::IncompleteBeta:
      return "IncompleteBeta";
  }
  return "?";
}

double binomial_coefficient_log(std::uint64_t a, std::int64_t b) noexcept {
  if (b < 0 || static_cast<std::uint64_t>(b) > a) return kNegInf;
  const auto k = static_cast<std::uint64_t>(b);
  const std::uint64_t m = a - k;
  if (k == 0 || m == 0) return 0.0;
  // ln a! - ln k! - ln m! with the large Stirling pieces regrouped into two
  // positive terms, k ln(a/k) + m ln(a/m), so nothing cancels.
  const double da = static_cast<double>(a);
  const double dk = static_cast<double>(k);
  const double dm = static_cast<double>(m);
  const double bulk = dk * std::log(da / dk) + dm * std::log(da / dm);
  const double corr = num::stirlerr(a) - num::stirlerr(k) - num::stirlerr(m);
  return bulk + corr - 0.5 * (num::kLn2Pi + std::log(dk) + std::log(dm / da));
}

double binomial_log_pmf(std::uint64_t x, std::uint64_t n, double p) noexcept {
  if (x > n) return kNegInf;
  if (p == 0.0) return x == 0 ? 0.0 : kNegInf;
  if (n == 0) return 0.0;
  const double q = 1.0 - p;
  const double dn = static_cast<double>(n);
  if (x == 0) {
    return p < 0.1 ? -num::bd0(dn, dn * q) - dn * p : dn * std::log1p(-p);
  }
  if (x == n) {
    return q < 0.1 ? -num::bd0(dn, dn * p) - dn * q : dn * std::log(p);
  }
  const double dx = static_cast<double>(x);
  const double lc = num::stirlerr(n) - num::stirlerr(x) - num::stirlerr(n - x) -
                    num::bd0(dx, dn * p) - num::bd0(dn - dx, dn * q);
  const double lf = num::kLn2Pi + std::log(dx) + std::log1p(-dx / dn);
  return lc - 0.5 * lf;
}

double binomial_pmf(std::uint64_t n, std::uint64_t total, double f) noexcept {
  return std::exp(binomial_log_pmf(n, total, f));
}

double poisson_log_pmf(std::uint64_t n, double mu) noexcept {
  if (mu == 0.0) return n == 0 ? 0.0 : kNegInf;
  if (n == 0) return -mu;
  const double dn = static_cast<double>(n);
  return -num::stirlerr(n) - num::bd0(dn, mu) - 0.5 * (num::kLn2Pi + std::log(dn));
}

double poisson_pmf(std::uint64_t n, double mu) noexcept { return std::exp(poisson_log_pmf(n, mu)); }

double poisson_tail(std::uint64_t n_min, double mu) {
  if (n_min == 0) return 1.0;
  if (mu == 0.0) return 0.0;
  const double dn = static_cast<double>(n_min);

  if (mu < dn + 1.0) {
    // Lower regularized gamma P(n_min, mu) by its power series: the tail
    // sum itself, pmf(n_min) * (1 + mu/(n_min+1) + mu^2/((n_min+1)(n_min+2)) + ...).
    num::CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (double k = dn + 1.0; term > 1e-17 * sum.high(); k += 1.0) {
      term *= mu / k;
      sum.add(term);
    }
    return std::min(1.0, std::exp(poisson_log_pmf(n_min, mu) + std::log(sum.value())));
  }

  if (n_min <= 64) {
    // Finite head sum_{n<n_min} pmf(n), walked down from its largest term at
    // n_min - 1. Here mu >= n_min + 1, so the head is small and 1 - head is safe.
    const double anchor = poisson_log_pmf(n_min - 1, mu);
    double term = 1.0;
    num::CompensatedSum head;
    head.add(term);
    for (std::uint64_t n = n_min - 1; n > 0; --n) {
      term *= static_cast<double>(n) / mu;
      head.add(term);
    }
    const double scale = std::exp(anchor);
    return std::clamp((1.0 - scale * head.high()) - scale * head.low(), 0.0, 1.0);
  }

  // Q(n_min, mu) = e^{-mu} mu^{n_min} / (n_min-1)! * cf = mu * pmf(n_min-1) * cf.
  const double q = mu * poisson_pmf(n_min - 1, mu) * num::upper_gamma_cf(dn, mu);
  return std::clamp(1.0 - q, 0.0, 1.0);
}

double posterior_density(double mu, std::uint64_t n_bak, double alpha) noexcept {
  // mu^B e^{-mu/alpha} / (alpha^{B+1} B!) = pmf_Poisson(B; mu/alpha) / alpha
  return poisson_pmf(n_bak, mu / alpha) / alpha;
}

}  // namespace ptsrc::sig
