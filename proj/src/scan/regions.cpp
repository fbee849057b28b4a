#include <cmath>
#include <stdexcept>
#include <string>

#include "ptsrc/scan.hpp"

namespace ptsrc::scan {

ApertureSpec ApertureSpec::make(double r_src, double r_in, double r_out) {
  if (!(std::isfinite(r_src) && std::isfinite(r_in) && std::isfinite(r_out))) {
    throw std::invalid_argument("aperture radii must be finite");
  }
  if (!(r_src > 0.0 && r_src <= r_in && r_in < r_out)) {
    throw std::invalid_argument("aperture radii must satisfy 0 < r_src <= r_in < r_out");
  }
  return ApertureSpec{r_src, r_in, r_out};
}

PixelRegions pixel_regions(std::size_t width, std::size_t height, PixelIndex center,
                           const ApertureSpec& spec) {
  if (center.x >= width || center.y >= height) {
    throw std::out_of_range("pixel (" + std::to_string(center.x) + ", " +
                            std::to_string(center.y) + ") is outside the map");
  }
  PixelRegions regions;
  const auto reach = static_cast<std::ptrdiff_t>(std::floor(spec.r_out));
  const auto cx = static_cast<std::ptrdiff_t>(center.x);
  const auto cy = static_cast<std::ptrdiff_t>(center.y);
  for (std::ptrdiff_t dy = -reach; dy <= reach; ++dy) {
    const std::ptrdiff_t y = cy + dy;
    if (y < 0 || y >= static_cast<std::ptrdiff_t>(height)) continue;
    for (std::ptrdiff_t dx = -reach; dx <= reach; ++dx) {
      const std::ptrdiff_t x = cx + dx;
      if (x < 0 || x >= static_cast<std::ptrdiff_t>(width)) continue;
      const double d = std::sqrt(static_cast<double>(dx * dx + dy * dy));
      const PixelIndex p{static_cast<std::size_t>(x), static_cast<std::size_t>(y)};
      if (d <= spec.r_src) {
        regions.src.push_back(p);
      } else if (d > spec.r_in && d <= spec.r_out) {
        regions.bak.push_back(p);
      }
    }
  }
  return regions;
}

}  // namespace ptsrc::scan
