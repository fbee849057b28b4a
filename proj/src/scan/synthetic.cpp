#include <cmath>
#include <stdexcept>

#include "ptsrc/null_simulator.hpp"
#include "ptsrc/scan.hpp"

namespace ptsrc::scan {

namespace {

// Injection draws live in the upper half of the stream space so they never
// share a stream with a background pixel.
constexpr std::uint64_t kInjectionStreamBase = std::uint64_t{1} << 63;

}  // namespace

CountMap simulate_background(std::size_t width, std::size_t height, double mu,
                             std::uint64_t seed) {
  if (width == 0 || height == 0) throw std::invalid_argument("map dimensions must be positive");
  if (!(std::isfinite(mu) && mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
  CountMap map = CountMap::zeros(width, height);
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    nullsim::CounterStream rng(seed, i);
    map.cells[i] = nullsim::sample_poisson(mu, rng);
  }
  return map;
}

void inject_source(CountMap& map, PixelIndex center, double radius, std::uint64_t counts,
                   std::uint64_t seed) {
  if (!(std::isfinite(radius) && radius >= 0.0)) {
    throw std::invalid_argument("radius must be non-negative");
  }
  const auto disk = pixel_regions(map.width, map.height, center,
                                  ApertureSpec{radius, radius, radius + 1.0})
                        .src;
  if (disk.empty()) {
    // radius 0 still keeps the center pixel.
    map.at(center.x, center.y) += counts;
    return;
  }
  const auto n = static_cast<double>(disk.size());
  for (std::uint64_t j = 0; j < counts; ++j) {
    nullsim::CounterStream rng(seed, kInjectionStreamBase | j);
    auto k = static_cast<std::size_t>(rng.next_uniform() * n);
    if (k >= disk.size()) k = disk.size() - 1;
    map.at(disk[k].x, disk[k].y) += 1;
  }
}

}  // namespace ptsrc::scan
