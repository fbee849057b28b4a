#include "ptsrc/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ptsrc/errors.hpp"

namespace ptsrc::num {

namespace {

constexpr std::uint64_t kTableSize = 16;

struct SmallFactorials {
  std::array<double, kTableSize> log_fact{};
  std::array<double, kTableSize> stirl{};

  SmallFactorials() {
    // Long double keeps the subtraction below one double ulp.
    long double lf = 0.0L;
    const long double half_ln_2pi = 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    log_fact[0] = 0.0;
    stirl[0] = 0.0;  // placeholder; n = 0 never reaches the expansion
    for (std::uint64_t n = 1; n < kTableSize; ++n) {
      const long double ln_n = std::log(static_cast<long double>(n));
      lf += ln_n;
      log_fact[n] = static_cast<double>(lf);
      stirl[n] = static_cast<double>(lf - (static_cast<long double>(n) + 0.5L) * ln_n +
                                     static_cast<long double>(n) - half_ln_2pi);
    }
  }
};

const SmallFactorials& small_factorials() {
  static const SmallFactorials table;
  return table;
}

constexpr double kTiny = 1e-300;

using ext = long double;

}  // namespace

double stirlerr(std::uint64_t n) noexcept {
  if (n < kTableSize) return small_factorials().stirl[n];
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  constexpr double s5 = 691.0 / 360360.0;
  constexpr double s6 = 1.0 / 156.0;
  const double nn = static_cast<double>(n);
  const double inv2 = 1.0 / (nn * nn);
  if (n > 500) return (s0 - s1 * inv2) / nn;
  if (n > 80) return (s0 - (s1 - s2 * inv2) * inv2) / nn;
  if (n > 35) return (s0 - (s1 - (s2 - s3 * inv2) * inv2) * inv2) / nn;
  if (n > 25) return (s0 - (s1 - (s2 - (s3 - s4 * inv2) * inv2) * inv2) * inv2) / nn;
  return (s0 - (s1 - (s2 - (s3 - (s4 - (s5 - s6 * inv2) * inv2) * inv2) * inv2) * inv2) * inv2) / nn;
}

double bd0(double x, double np) noexcept {
  if (x == 0.0) return np;
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    if (std::abs(s) < std::numeric_limits<double>::min()) return s;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

double log_factorial(std::uint64_t n) noexcept {
  if (n < kTableSize) return small_factorials().log_fact[n];
  const double nn = static_cast<double>(n);
  return (nn + 0.5) * std::log(nn) - nn + 0.5 * kLn2Pi + stirlerr(n);
}

int beta_cf_budget(double a, double b) noexcept {
  const double scaled = 16.0 * std::pow(a + b, 0.25);
  return scaled > 500.0 ? static_cast<int>(std::ceil(scaled)) : 500;
}

// The recurrences run in extended precision: several hundred Lentz steps
// in double accumulate a few 1e-13 of relative rounding error.
double incomplete_beta_cf(double a_in, double b_in, double x_in) {
  const ext a = a_in;
  const ext b = b_in;
  const ext x = x_in;
  const ext qab = a + b;
  const ext qap = a + 1.0;
  const ext qam = a - 1.0;
  ext c = 1.0;
  ext d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  ext h = d;
  const int budget = beta_cf_budget(a_in, b_in);
  for (int m = 1; m <= budget; ++m) {
    const ext mm = m;
    const ext m2 = 2.0 * mm;
    // even step
    ext aa = mm * (b - mm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    // odd step
    aa = -(a + mm) * (qab + mm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const ext del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kCfTolerance) return static_cast<double>(h);
  }
  throw ConvergenceFailure("incomplete beta continued fraction did not converge in " +
                           std::to_string(budget) + " iterations (a=" + std::to_string(a_in) +
                           ", b=" + std::to_string(b_in) + ", x=" + std::to_string(x_in) + ")");
}

double upper_gamma_cf(double a_in, double x_in) {
  const ext a = a_in;
  const ext x = x_in;
  ext b = x + 1.0 - a;
  ext c = 1.0 / kTiny;
  ext d = 1.0 / b;
  ext h = d;
  for (int i = 1; i <= kGammaCfBudget; ++i) {
    const ext an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const ext del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kCfTolerance) return static_cast<double>(h);
  }
  throw ConvergenceFailure("incomplete gamma continued fraction did not converge (a=" +
                           std::to_string(a_in) + ", x=" + std::to_string(x_in) + ")");
}

}  // namespace ptsrc::num
