#pragma once

// Significance of a source-region count excess over a background estimate.
//
// Two closed forms of the same p-value are provided. The binomial-tail form
// conditions on the total N + B and sums the upper tail of Binomial(N+B, f);
// the Bayesian-series form averages the Poisson upper tail over the gamma
// posterior of the source-region mean under a flat prior. They agree
// identically; both are kept so each can check the other.
//
// Every routine works in natural-log space and never forms factorials.
// All functions are pure and thread-safe.

#include <cstdint>
#include <string_view>

namespace ptsrc::sig {

/// Source and background areas with the derived fraction f = A_src/(A_src +
/// A_bak) and ratio alpha = A_src/A_bak.
class RegionGeometry {
 public:
  /// Throws std::invalid_argument unless both areas are finite and > 0.
  static RegionGeometry from_areas(double a_src, double a_bak);
  /// Unit total area split as (f, 1-f), keeping f bit-exact. Throws
  /// std::invalid_argument unless 0 < f < 1.
  static RegionGeometry from_fraction(double f);

  double a_src() const noexcept { return a_src_; }
  double a_bak() const noexcept { return a_bak_; }
  double f() const noexcept { return f_; }
  double alpha() const noexcept { return alpha_; }

 private:
  RegionGeometry(double a_src, double a_bak) noexcept;

  double a_src_;
  double a_bak_;
  double f_;
  double alpha_;
};

/// Counts observed in the source region (N) and background region (B).
struct CountObservation {
  std::uint64_t n_src = 0;
  std::uint64_t n_bak = 0;

  std::uint64_t total() const noexcept { return n_src + n_bak; }
};

enum class Method { BinomialTail, BayesSeries, IncompleteBeta };

std::string_view to_string(Method m) noexcept;

struct PValueResult {
  double p = 1.0;
  double log_p = 0.0;  // -inf when p underflows to zero
  double sigma = 0.0;  // one-sided Gaussian equivalent
  Method method = Method::BinomialTail;
  double truncation_bound = 0.0;  // absolute bound on the omitted series tail
};

// ---- combinatorics and distributions ---------------------------------------

/// ln C(a, b); -infinity when b < 0 or b > a.
double binomial_coefficient_log(std::uint64_t a, std::int64_t b) noexcept;

/// ln[C(total, n) f^n (1-f)^(total-n)] by Loader's saddle-point expansion.
/// -infinity outside the support. Requires 0 <= f < 1.
double binomial_log_pmf(std::uint64_t n, std::uint64_t total, double f) noexcept;
double binomial_pmf(std::uint64_t n, std::uint64_t total, double f) noexcept;

double poisson_log_pmf(std::uint64_t n, double mu) noexcept;
double poisson_pmf(std::uint64_t n, double mu) noexcept;

/// P(X >= n_min) for X ~ Poisson(mu).
double poisson_tail(std::uint64_t n_min, double mu);

/// Normalized posterior density of the source-region mean given n_bak
/// background counts under a flat prior: Gamma(shape n_bak + 1, scale alpha).
double posterior_density(double mu, std::uint64_t n_bak, double alpha) noexcept;

// ---- p-values ---------------------------------------------------------------

/// Binomial upper tail P(n >= N | N+B, f). Direct compensated summation for
/// N + B <= kDirectSumLimit, incomplete beta above.
PValueResult p_lampton(const CountObservation& obs, const RegionGeometry& geom);

/// The same tail as the regularized incomplete beta I_f(N, B+1).
PValueResult p_lampton_beta(const CountObservation& obs, const RegionGeometry& geom);

/// Posterior-averaged Poisson tail. Picks the finite complement form when
/// it is numerically safe, the tail series otherwise. Throws
/// std::invalid_argument when rel_tol <= 0.
PValueResult p_alexandreas(const CountObservation& obs, const RegionGeometry& geom,
                           double rel_tol);

/// (1-f)^(B+1) sum_{n>=N} C(n+B, n) f^n with geometric remainder bound.
/// Stops when the bound drops below rel_tol times the partial sum.
PValueResult bayes_series(const CountObservation& obs, const RegionGeometry& geom,
                          double rel_tol);

/// 1 - sum_{n<N} alpha^n / (1+alpha)^(n+B+1) (n+B)!/(n! B!).
PValueResult bayes_complement(const CountObservation& obs, const RegionGeometry& geom);

inline constexpr std::uint64_t kDirectSumLimit = 10'000;
inline constexpr std::uint64_t kComplementMaxN = 64;
inline constexpr double kComplementMinP = 1e-2;
inline constexpr std::uint64_t kSeriesTermLimit = 10'000'000;

// ---- Gaussian equivalents ---------------------------------------------------

/// ln Q(s), Q the standard normal upper tail. Finite for every finite s.
double normal_tail_log(double s) noexcept;

/// s >= 0 with Q(s) = exp(log_p). p >= 1/2 maps to 0.
double p_to_sigma(double log_p) noexcept;

}  // namespace ptsrc::sig
