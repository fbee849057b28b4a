#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptsrc/numerics.hpp"
#include "ptsrc/significance.hpp"

namespace ptsrc::sig {

namespace {

// Above this, erfc is within a few decades of underflow; switch to the
// Mills-ratio continued fraction.
constexpr double kMillsSwitch = 30.0;

double log_normal_density(double s) noexcept { return -0.5 * s * s - 0.5 * num::kLn2Pi; }

// Q(s)/phi(s) = 1/(s + 1/(s + 2/(s + 3/(s + ...)))), evaluated bottom-up.
double mills_ratio(double s) noexcept {
  double t = s;
  for (int k = 80; k >= 1; --k) t = s + k / t;
  return 1.0 / t;
}

}  // namespace

double normal_tail_log(double s) noexcept {
  if (s < -1.0) return std::log1p(-0.5 * std::erfc(-s * std::numbers::sqrt2 * 0.5));
  if (s < kMillsSwitch) return std::log(0.5 * std::erfc(s * std::numbers::sqrt2 * 0.5));
  return log_normal_density(s) + std::log(mills_ratio(s));
}

double p_to_sigma(double log_p) noexcept {
  if (!(log_p < -std::numbers::ln2)) return 0.0;
  if (log_p == -std::numeric_limits<double>::infinity()) {
    return std::numeric_limits<double>::infinity();
  }

  // Asymptotic start: ln Q(s) ~ -s^2/2 - ln s - ln sqrt(2 pi).
  double s = 1.0;
  for (int i = 0; i < 4; ++i) {
    const double rhs = -2.0 * log_p - num::kLn2Pi - 2.0 * std::log(std::max(s, 1.0));
    s = std::sqrt(std::max(rhs, 0.0));
  }

  // Safeguarded Newton on g(s) = ln Q(s) - log_p, which is strictly
  // decreasing with g(0) > 0.
  double lo = 0.0;
  double hi = std::max(2.0 * s, 1.0);
  while (normal_tail_log(hi) > log_p) hi *= 2.0;
  s = std::clamp(s, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double log_q = normal_tail_log(s);
    const double g = log_q - log_p;
    if (g > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    // g'(s) = -phi(s)/Q(s)
    const double slope = -std::exp(log_normal_density(s) - log_q);
    double next = s - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * std::max(1.0, s)) return next;
    s = next;
  }
  return s;
}

}  // namespace ptsrc::sig
