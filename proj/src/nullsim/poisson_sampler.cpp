#include <cmath>
#include <stdexcept>

#include "ptsrc/null_simulator.hpp"
#include "ptsrc/numerics.hpp"

namespace ptsrc::nullsim {

namespace {

std::uint64_t poisson_inversion(double mu, CounterStream& rng) {
  const double u = rng.next_uniform();
  double pmf = std::exp(-mu);
  double cdf = pmf;
  std::uint64_t k = 0;
  // Far past the mean the pmf underflows; rounding can leave cdf < u < 1.
  while (u > cdf && k < 1000) {
    ++k;
    pmf *= mu / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::uint64_t poisson_ptrs(double mu, CounterStream& rng) {
  const double slam = std::sqrt(mu);
  const double loglam = std::log(mu);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = rng.next_uniform() - 0.5;
    const double v = rng.next_uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const auto ki = static_cast<std::uint64_t>(k);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mu + k * loglam - num::log_factorial(ki)) {
      return ki;
    }
  }
}

}  // namespace

NullModel NullModel::make(double mu, double alpha, std::uint64_t seed) {
  if (!(std::isfinite(mu) && mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return NullModel{mu, alpha, seed};
}

std::uint64_t sample_poisson(double mu, CounterStream& rng) {
  if (mu <= 0.0) return 0;
  return mu < kInversionLimit ? poisson_inversion(mu, rng) : poisson_ptrs(mu, rng);
}

sig::CountObservation sample_counts(const NullModel& model, std::uint64_t stream_index) {
  CounterStream rng(model.seed, stream_index);
  sig::CountObservation obs;
  obs.n_src = sample_poisson(model.mu, rng);
  obs.n_bak = sample_poisson(model.mu / model.alpha, rng);
  return obs;
}

}  // namespace ptsrc::nullsim
