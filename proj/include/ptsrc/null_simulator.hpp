#pragma once

// Null-hypothesis checks for the binomial-tail p-value.
//
// Monte Carlo: draw N ~ Poisson(mu) and B ~ Poisson(mu/alpha) from
// counter-based streams (one stream per trial) and check super-uniformity,
// P(p <= t) <= t. Exhaustive: enumerate the conditional binomial null for a
// fixed total and check exact calibration at every achievable level.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptsrc/philox.hpp"
#include "ptsrc/significance.hpp"

namespace ptsrc::nullsim {

struct NullModel {
  double mu = 1.0;     // expected source-region counts
  double alpha = 1.0;  // A_src / A_bak
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless mu > 0 and alpha > 0 (finite).
  static NullModel make(double mu, double alpha, std::uint64_t seed);
};

/// Poisson variate: sequential inversion below mu = 30, Hormann's PTRS
/// transformed rejection above.
std::uint64_t sample_poisson(double mu, CounterStream& rng);

inline constexpr double kInversionLimit = 30.0;

/// (N, B) for one trial; a pure function of (model, stream_index).
sig::CountObservation sample_counts(const NullModel& model, std::uint64_t stream_index);

struct CalibrationReport {
  std::uint64_t trials = 0;
  std::vector<double> thresholds;
  std::vector<double> empirical_rates;
  std::vector<double> binomial_3sigma;
  bool passed = true;
};

/// Requires trials > 0 and every threshold in (0, 1); throws
/// std::invalid_argument otherwise. Results do not depend on `threads`.
CalibrationReport calibrate(const NullModel& model, std::uint64_t trials,
                            std::span<const double> thresholds, unsigned threads = 1);

std::string render_text(const CalibrationReport& report, const NullModel& model);
std::string calibration_csv_header();
/// One CSV line per threshold (newline-separated, no trailing newline).
std::string render_csv(const CalibrationReport& report, const NullModel& model);

struct NullOutcome {
  double p_value = 1.0;
  double mass = 0.0;
};

inline constexpr std::uint64_t kEnumerationLimit = 2000;

/// Every outcome n = 0..total of Binomial(total, f) with its binomial-tail
/// p-value, sorted by p ascending. Throws EnumerationTooLarge above
/// kEnumerationLimit and std::invalid_argument unless 0 < f < 1.
std::vector<NullOutcome> exact_null_distribution(std::uint64_t total, double f);

/// Cumulative mass at every achieved level equals that level within 1e-10.
bool uniformity_check(std::span<const NullOutcome> dist);

inline constexpr double kUniformityTolerance = 1e-10;

}  // namespace ptsrc::nullsim
