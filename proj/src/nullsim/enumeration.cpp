#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptsrc/errors.hpp"
#include "ptsrc/null_simulator.hpp"
#include "ptsrc/numerics.hpp"

namespace ptsrc::nullsim {

std::vector<NullOutcome> exact_null_distribution(std::uint64_t total, double f) {
  if (total > kEnumerationLimit) {
    throw EnumerationTooLarge("enumeration limited to totals <= " +
                              std::to_string(kEnumerationLimit));
  }
  const auto geom = sig::RegionGeometry::from_fraction(f);

  std::vector<NullOutcome> dist;
  dist.reserve(total + 1);
  for (std::uint64_t n = 0; n <= total; ++n) {
    const sig::CountObservation obs{n, total - n};
    dist.push_back({sig::p_lampton(obs, geom).p, sig::binomial_pmf(n, total, geom.f())});
  }
  std::stable_sort(dist.begin(), dist.end(),
                   [](const NullOutcome& a, const NullOutcome& b) { return a.p_value < b.p_value; });
  return dist;
}

bool uniformity_check(std::span<const NullOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("empty null distribution");
  std::vector<NullOutcome> dist(outcomes.begin(), outcomes.end());
  std::stable_sort(dist.begin(), dist.end(),
                   [](const NullOutcome& a, const NullOutcome& b) { return a.p_value < b.p_value; });
  num::CompensatedSum cumulative;
  std::size_t i = 0;
  while (i < dist.size()) {
    // All outcomes tied at this level count as "p <= level".
    const double level = dist[i].p_value;
    while (i < dist.size() && dist[i].p_value == level) cumulative.add(dist[i++].mass);
    if (std::abs(cumulative.value() - level) > kUniformityTolerance) return false;
  }
  return true;
}

}  // namespace ptsrc::nullsim
