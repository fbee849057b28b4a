#pragma once

// Extended-precision (256-bit MPFR) reference values used to check the
// double-precision routines. Results are rounded to double once, at the end.

#include <cstdint>

#include "ptsrc/exact.hpp"

namespace ptsrc::exact {

/// Nearest double to q. May underflow to 0 for very small q.
double to_double(const ExactRational& q);

/// ln q for q > 0, finite even when q is far below the double range.
double log_value(const ExactRational& q);

/// ln C(a, b) from the exact integer.
double binomial_coefficient_log_reference(std::uint64_t a, std::int64_t b);

/// ln[mu^n e^{-mu} / n!].
double poisson_log_pmf_reference(std::uint64_t n, const ExactRational& mu);

/// ln Q(s) for the standard normal upper tail, via erfc at 256 bits.
double normal_tail_log_reference(double s);

/// sigma with ln Q(sigma) = log_p, by bisection on normal_tail_log_reference.
double sigma_reference(double log_p);

}  // namespace ptsrc::exact
