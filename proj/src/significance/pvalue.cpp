#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ptsrc/errors.hpp"
#include "ptsrc/numerics.hpp"
#include "ptsrc/significance.hpp"

namespace ptsrc::sig {

namespace {

// Terms this far below the largest one cannot move a sum of <= 10^4 terms.
constexpr double kNegligible = 1e-30;

PValueResult make_result(double log_p, Method method, double bound = 0.0) {
  PValueResult r;
  r.log_p = std::min(log_p, 0.0);
  r.p = std::clamp(std::exp(r.log_p), 0.0, 1.0);
  r.sigma = p_to_sigma(r.log_p);
  r.method = method;
  r.truncation_bound = bound;
  return r;
}

PValueResult certain(Method method) { return make_result(0.0, method); }

void require_positive_tolerance(double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
}

PValueResult lampton_direct(std::uint64_t n_src, std::uint64_t n_bak, double f) {
  const std::uint64_t total = n_src + n_bak;
  const double q = 1.0 - f;

  // Anchor the recurrences at the largest term in [N, N+B]; every other
  // term is stored relative to it, so nothing under- or overflows.
  const auto mode_guess = static_cast<std::uint64_t>(std::floor(static_cast<double>(total + 1) * f));
  const std::uint64_t mode = std::clamp(mode_guess, n_src, total);
  const double log_anchor = binomial_log_pmf(mode, total, f);

  std::vector<double> terms(total - n_src + 1, 0.0);
  terms[mode - n_src] = 1.0;
  double s = 1.0;
  for (std::uint64_t n = mode; n < total && s > kNegligible; ++n) {
    s *= (static_cast<double>(total - n) * f) / (static_cast<double>(n + 1) * q);
    terms[n + 1 - n_src] = s;
  }
  s = 1.0;
  for (std::uint64_t n = mode; n > n_src && s > kNegligible; --n) {
    s *= (static_cast<double>(n) * q) / (static_cast<double>(total - n + 1) * f);
    terms[n - 1 - n_src] = s;
  }

  num::CompensatedSum sum;
  if (f < 0.5) {
    std::for_each(terms.rbegin(), terms.rend(), [&](double t) { sum.add(t); });
  } else {
    std::for_each(terms.begin(), terms.end(), [&](double t) { sum.add(t); });
  }
  return make_result(log_anchor + std::log(sum.value()), Method::BinomialTail);
}

}  // namespace

PValueResult p_lampton(const CountObservation& obs, const RegionGeometry& geom) {
  if (obs.n_src == 0) return certain(Method::BinomialTail);
  if (obs.total() > kDirectSumLimit) return p_lampton_beta(obs, geom);
  return lampton_direct(obs.n_src, obs.n_bak, geom.f());
}

PValueResult p_lampton_beta(const CountObservation& obs, const RegionGeometry& geom) {
  if (obs.n_src == 0) return certain(Method::IncompleteBeta);
  const double f = geom.f();
  const double a = static_cast<double>(obs.n_src);
  const double b = static_cast<double>(obs.n_bak) + 1.0;
  const std::uint64_t total = obs.total();

  if (f < (a + 1.0) / (a + b + 2.0)) {
    // x^a (1-x)^b / (a B(a,b)) = C(N+B, N) f^N (1-f)^(B+1)
    const double log_front = std::log1p(-f) + binomial_log_pmf(obs.n_src, total, f);
    const double cf = num::incomplete_beta_cf(a, b, f);
    return make_result(log_front + std::log(cf), Method::IncompleteBeta);
  }
  // I_f(a, b) = 1 - I_{1-f}(b, a); prefactor C(N+B, N-1) f^N (1-f)^(B+1)
  const double log_front = std::log(f) + binomial_log_pmf(obs.n_src - 1, total, f);
  const double cf = num::incomplete_beta_cf(b, a, 1.0 - f);
  const double lower = std::exp(log_front) * cf;
  return make_result(std::log1p(-std::min(lower, 1.0)), Method::IncompleteBeta);
}

PValueResult bayes_series(const CountObservation& obs, const RegionGeometry& geom,
                          double rel_tol) {
  require_positive_tolerance(rel_tol);
  if (obs.n_src == 0) return certain(Method::BayesSeries);

  const double f = geom.f();
  const double q = 1.0 - f;
  const double b = static_cast<double>(obs.n_bak);
  const double n_src = static_cast<double>(obs.n_src);

  // t_n = C(n+B, n) f^n (1-f)^(B+1) rises while f (n+B+1) >= n+1. Anchor at
  // the largest term with n >= N so the log of the anchor stays moderate.
  const double crest = std::floor((f * (b + 1.0) - 1.0) / q) + 1.0;
  const double peak = std::max(n_src, crest);
  if (peak - n_src > static_cast<double>(kSeriesTermLimit)) {
    throw TruncationFailure("Bayesian tail series: term ratio still >= 1 after " +
                            std::to_string(kSeriesTermLimit) + " terms");
  }
  const auto m = static_cast<std::uint64_t>(peak);
  const double log_anchor = std::log1p(-f) + binomial_log_pmf(m, m + obs.n_bak, f);

  // Rising part N..m-1, collected downward from the peak and summed small
  // terms first.
  std::vector<double> rising;
  double s = 1.0;
  for (std::uint64_t n = m; n > obs.n_src && s > kNegligible; --n) {
    s *= static_cast<double>(n) / (f * (static_cast<double>(n) + b));
    rising.push_back(s);
  }
  num::CompensatedSum sum;
  std::for_each(rising.rbegin(), rising.rend(), [&](double t) { sum.add(t); });

  // Falling part from the peak, stopped by the geometric remainder bound.
  double term = 1.0;
  sum.add(term);
  double bound = 0.0;
  std::uint64_t steps = 0;
  for (double n = peak;; n += 1.0) {
    const double next = term * (f * (n + b + 1.0) / (n + 1.0));
    const double ratio_after = f * (n + b + 2.0) / (n + 2.0);
    const double remainder = next / (1.0 - ratio_after);
    if (remainder < rel_tol * sum.value()) {
      bound = remainder;
      break;
    }
    if (++steps > 10 * kSeriesTermLimit) {
      throw TruncationFailure("Bayesian tail series did not reach the requested tolerance");
    }
    sum.add(next);
    term = next;
  }

  const double log_p = log_anchor + std::log(sum.value());
  const double abs_bound = bound > 0.0 ? std::exp(log_anchor + std::log(bound)) : 0.0;
  return make_result(log_p, Method::BayesSeries, abs_bound);
}

PValueResult bayes_complement(const CountObservation& obs, const RegionGeometry& geom) {
  if (obs.n_src == 0) return certain(Method::BayesSeries);

  const double f = geom.f();
  const double q = 1.0 - f;
  const double b = static_cast<double>(obs.n_bak);
  const std::uint64_t last = obs.n_src - 1;

  // Terms t_n = (1-f)^(B+1) C(n+B, n) f^n rise while f (n+B+1) >= n+1.
  const double peak = std::floor((f * (b + 1.0) - 1.0) / q) + 1.0;
  const std::uint64_t anchor =
      peak <= 0.0 ? 0 : std::min(last, static_cast<std::uint64_t>(peak));
  const double log_anchor = std::log1p(-f) + binomial_log_pmf(anchor, anchor + obs.n_bak, f);

  std::vector<double> terms(last + 1, 0.0);
  terms[anchor] = 1.0;
  double s = 1.0;
  for (std::uint64_t n = anchor; n < last && s > kNegligible; ++n) {
    s *= f * (static_cast<double>(n) + b + 1.0) / static_cast<double>(n + 1);
    terms[n + 1] = s;
  }
  s = 1.0;
  for (std::uint64_t n = anchor; n > 0 && s > kNegligible; --n) {
    s *= static_cast<double>(n) / (f * (static_cast<double>(n) + b));
    terms[n - 1] = s;
  }
  num::CompensatedSum head;
  std::for_each(terms.begin(), terms.end(), [&](double t) { head.add(t); });

  const double scale = std::exp(log_anchor);
  const double hi = scale * head.high();
  const double lo = scale * head.low();
  if (hi < 0.5) return make_result(std::log1p(-(hi + lo)), Method::BayesSeries);
  const double p = std::max((1.0 - hi) - lo, 0.0);
  return make_result(std::log(p), Method::BayesSeries);
}

PValueResult p_alexandreas(const CountObservation& obs, const RegionGeometry& geom,
                           double rel_tol) {
  require_positive_tolerance(rel_tol);
  if (obs.n_src <= kComplementMaxN) {
    PValueResult r = bayes_complement(obs, geom);
    if (r.p >= kComplementMinP) return r;
  }
  return bayes_series(obs, geom, rel_tol);
}

}  // namespace ptsrc::sig
