#pragma once

// Low-level numerical kernels shared by the p-value routines: compensated
// accumulation, Loader's saddle-point pieces (stirlerr, bd0) and the
// continued fractions for the incomplete beta and gamma functions.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ptsrc::num {

inline constexpr double kLn2Pi = 1.8378770664093454835606594728112;

/// Neumaier's variant of Kahan summation. The running compensation is kept
/// separately so callers can form `1 - sum` without losing the low part.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  // Exact when `factor` is a power of two.
  void scale(double factor) noexcept {
    sum_ *= factor;
    comp_ *= factor;
  }

  double value() const noexcept { return sum_ + comp_; }
  double high() const noexcept { return sum_; }
  double low() const noexcept { return comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)], the Stirling-series error.
double stirlerr(std::uint64_t n) noexcept;

/// Deviance term x ln(x / np) + np - x, evaluated without cancellation when
/// x is close to np.
double bd0(double x, double np) noexcept;

/// ln(n!) via the Stirling series plus stirlerr; exact table below 16.
double log_factorial(std::uint64_t n) noexcept;

/// Iteration budget for the incomplete-beta continued fraction. Grows like
/// the fourth root of a + b above a floor of 500.
int beta_cf_budget(double a, double b) noexcept;

/// Continued-fraction part of I_x(a, b) (modified Lentz). The caller supplies
/// the prefactor x^a (1-x)^b / (a B(a,b)). Valid for x < (a+1)/(a+b+2).
/// Throws ConvergenceFailure when the budget is exhausted.
double incomplete_beta_cf(double a, double b, double x);

/// Continued-fraction part of the regularized upper incomplete gamma
/// Q(a, x) (modified Lentz), valid for x >= a + 1. The caller supplies the
/// prefactor e^{-x} x^a / Gamma(a).
double upper_gamma_cf(double a, double x);

inline constexpr int kGammaCfBudget = 500;
inline constexpr double kCfTolerance = 1e-15;

}  // namespace ptsrc::num
