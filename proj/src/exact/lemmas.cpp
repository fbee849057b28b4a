#include <stdexcept>

#include "ptsrc/errors.hpp"
#include "ptsrc/exact.hpp"

namespace ptsrc::exact {

namespace {

void require_unit_interval(const ExactRational& f, bool allow_zero) {
  if (f < 0 || (!allow_zero && f == 0) || f >= 1) {
    throw std::invalid_argument("fraction f outside the admissible interval: " + f.get_str());
  }
}

BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace

bool lemma1_holds(std::uint64_t a, std::int64_t b) {
  return binom_exact(a, b) + binom_exact(a, b + 1) == binom_exact(a + 1, b + 1);
}

Lemma2Bracket lemma2_partial_check(std::uint64_t n, const ExactRational& f, std::uint64_t k_max) {
  require_unit_interval(f, /*allow_zero=*/true);
  if (k_max < n) throw std::invalid_argument("k_max must be >= n");

  // Ratio of successive terms t_{k+1}/t_k = f (k+1)/(k+1-n) decreases in k,
  // so the one just past the cut bounds every later ratio.
  ExactRational growth{BigInt(static_cast<unsigned long>(k_max + 2)),
                       BigInt(static_cast<unsigned long>(k_max + 2 - n))};
  growth.canonicalize();
  const ExactRational ratio = f * growth;
  if (ratio >= 1) {
    throw RatioNotContracting("lemma 2 remainder: ratio " + ratio.get_str() + " >= 1 at k_max=" +
                              std::to_string(k_max));
  }

  Lemma2Bracket out;
  const ExactRational one_minus_f = 1 - f;
  out.left = pow(f, n) / pow(one_minus_f, n + 1);

  // Terms below k = n vanish (C(k, n) = 0) but the sum starts at k = 0.
  ExactRational partial = 0;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const BigInt c = binom_exact(k, static_cast<std::int64_t>(n));
    if (c != 0) partial += ExactRational(c) * pow(f, k);
  }
  out.partial = partial;
  const ExactRational next = ExactRational(binom_exact(k_max + 1, static_cast<std::int64_t>(n))) *
                             pow(f, k_max + 1);
  out.remainder_bound = next / (1 - ratio);
  out.holds = out.partial <= out.left && out.left <= out.partial + out.remainder_bound;
  return out;
}

bool lemma3_holds(std::uint64_t n_src, std::uint64_t n_bak, std::uint64_t n,
                  const BinomialTable& table) {
  const std::uint64_t total = n_src + n_bak;
  const BigInt& lhs = table(n + total, static_cast<std::int64_t>(n + n_src));
  BigInt rhs = 0;
  for (std::uint64_t k = 0; k <= n_bak && k <= n; ++k) {
    rhs += table(total, static_cast<std::int64_t>(n_src + k)) *
           table(n, static_cast<std::int64_t>(k));
  }
  return lhs == rhs;
}

bool lemma3_holds(std::uint64_t n_src, std::uint64_t n_bak, std::uint64_t n) {
  const std::uint64_t total = n_src + n_bak;
  const BigInt lhs = binom_exact(n + total, static_cast<std::int64_t>(n + n_src));
  BigInt rhs = 0;
  for (std::uint64_t k = 0; k <= n_bak; ++k) {
    rhs += binom_exact(total, static_cast<std::int64_t>(n_src + k)) *
           binom_exact(n, static_cast<std::int64_t>(k));
  }
  return lhs == rhs;
}

ExactRational p_lampton_exact(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& f) {
  require_unit_interval(f, /*allow_zero=*/true);
  if (n_src == 0) return 1;
  // With f = a/d: sum_n C(T, n) a^n (d-a)^(T-n) / d^T, all in integers.
  const std::uint64_t total = n_src + n_bak;
  const BigInt& a = f.get_num();
  const BigInt& d = f.get_den();
  const BigInt rest = d - a;
  BigInt sum = 0;
  BigInt c = binom_exact(total, static_cast<std::int64_t>(n_src));
  for (std::uint64_t n = n_src; n <= total; ++n) {
    BigInt pa;
    BigInt pr;
    mpz_pow_ui(pa.get_mpz_t(), a.get_mpz_t(), n);
    mpz_pow_ui(pr.get_mpz_t(), rest.get_mpz_t(), total - n);
    sum += c * pa * pr;
    if (n < total) {
      c *= static_cast<unsigned long>(total - n);
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), n + 1);
    }
  }
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), d.get_mpz_t(), total);
  ExactRational p{sum, den};
  p.canonicalize();
  return p;
}

SeriesBracket bayes_series_exact(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& f,
                                 const ExactRational& rel_tol) {
  require_unit_interval(f, /*allow_zero=*/false);
  if (rel_tol <= 0) throw std::invalid_argument("rel_tol must be positive");

  const BigInt& a = f.get_num();
  const BigInt& d = f.get_den();
  const ExactRational prefactor = pow(1 - f, n_bak + 1);

  // Running integer state for terms n = N .. m:
  //   acc = sum_n C(n+B, n) a^n d^(m-n),  so the series partial is acc / d^m.
  std::uint64_t m = n_src;
  BigInt coeff = binom_exact(n_src + n_bak, static_cast<std::int64_t>(n_src));  // C(m+B, m)
  BigInt a_pow;
  mpz_pow_ui(a_pow.get_mpz_t(), a.get_mpz_t(), m);
  BigInt acc = coeff * a_pow;
  BigInt d_pow;
  mpz_pow_ui(d_pow.get_mpz_t(), d.get_mpz_t(), m);
  std::uint64_t terms = 1;

  auto advance = [&] {
    coeff *= static_cast<unsigned long>(m + 1 + n_bak);
    mpz_divexact_ui(coeff.get_mpz_t(), coeff.get_mpz_t(), m + 1);
    a_pow *= a;
    d_pow *= d;
    acc = acc * d + coeff * a_pow;
    ++m;
    ++terms;
  };

  for (std::uint64_t target = 64;; target *= 2) {
    if (target > kMaxSeriesTerms) {
      throw RatioNotContracting("Bayesian series bracket did not tighten within " +
                                std::to_string(kMaxSeriesTerms) + " terms");
    }
    while (terms < target) advance();

    // Tail after index m: t_{m+1} / (1 - r_{m+1}), r_{m+1} = f (m+B+2)/(m+2).
    const BigInt ratio_num = a * static_cast<unsigned long>(m + n_bak + 2);
    const BigInt ratio_den = d * static_cast<unsigned long>(m + 2);
    if (ratio_num >= ratio_den) continue;  // not contracting yet: double and retry

    BigInt next_coeff = coeff * static_cast<unsigned long>(m + 1 + n_bak);
    mpz_divexact_ui(next_coeff.get_mpz_t(), next_coeff.get_mpz_t(), m + 1);
    ExactRational next{next_coeff * a_pow * a, d_pow * d};
    ExactRational one_minus_r{ratio_den - ratio_num, ratio_den};
    next.canonicalize();
    one_minus_r.canonicalize();

    ExactRational partial{acc, d_pow};
    partial.canonicalize();
    partial *= prefactor;
    const ExactRational bound = prefactor * next / one_minus_r;
    if (bound < rel_tol * partial) return SeriesBracket{partial, bound, terms};
  }
}

bool equivalence_check(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& f,
                       const ExactRational& rel_tol) {
  const SeriesBracket s = bayes_series_exact(n_src, n_bak, f, rel_tol);
  const ExactRational target = p_lampton_exact(n_src, n_bak, f);
  return s.partial <= target && target <= s.partial + s.bound;
}

bool factorization_check(std::uint64_t n_src, std::uint64_t n_bak, const ExactRational& mu,
                         const ExactRational& alpha) {
  if (mu <= 0 || alpha <= 0) throw std::invalid_argument("mu and alpha must be positive");
  const std::uint64_t total = n_src + n_bak;
  const ExactRational mu_bak = mu / alpha;

  // e^{-mu} e^{-mu/alpha} appears once on each side and is dropped.
  const ExactRational lhs = pow(mu, n_src) * pow(mu_bak, n_bak) /
                            ExactRational(factorial(n_src) * factorial(n_bak));

  const ExactRational frac = alpha / (1 + alpha);
  const ExactRational rhs = pow(mu + mu_bak, total) / ExactRational(factorial(total)) *
                            ExactRational(binom_exact(total, static_cast<std::int64_t>(n_src))) *
                            pow(frac, n_src) * pow(1 - frac, n_bak);
  return lhs == rhs;
}

}  // namespace ptsrc::exact
