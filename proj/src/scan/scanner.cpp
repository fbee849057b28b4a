#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "ptsrc/scan.hpp"
#include "ptsrc/significance.hpp"

namespace ptsrc::scan {

namespace {

struct Offset {
  std::ptrdiff_t dx;
  std::ptrdiff_t dy;
  bool src;
};

std::vector<Offset> aperture_offsets(const ApertureSpec& spec) {
  // Same membership rule as pixel_regions, evaluated once for an unclipped
  // aperture centred on a huge map.
  const auto reach = static_cast<std::ptrdiff_t>(std::floor(spec.r_out));
  const auto side = static_cast<std::size_t>(2 * reach + 1);
  const auto regions = pixel_regions(side, side, {static_cast<std::size_t>(reach),
                                                  static_cast<std::size_t>(reach)}, spec);
  std::vector<Offset> offsets;
  auto add = [&](const std::vector<PixelIndex>& pixels, bool src) {
    for (const auto& p : pixels) {
      offsets.push_back({static_cast<std::ptrdiff_t>(p.x) - reach,
                         static_cast<std::ptrdiff_t>(p.y) - reach, src});
    }
  };
  add(regions.src, true);
  add(regions.bak, false);
  return offsets;
}

using CacheKey = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

void scan_rows(const CountMap& map, const std::vector<Offset>& offsets,
               const ScanOptions& options, std::size_t y_begin, std::size_t y_end,
               std::vector<DetectionRecord>& out) {
  const auto w = static_cast<std::ptrdiff_t>(map.width);
  const auto h = static_cast<std::ptrdiff_t>(map.height);
  const double log_trials = std::log(static_cast<double>(options.trials_factor));
  std::map<CacheKey, sig::PValueResult> cache;

  for (std::size_t y = y_begin; y < y_end; ++y) {
    for (std::size_t x = 0; x < map.width; ++x) {
      DetectionRecord r;
      r.x = x;
      r.y = y;
      for (const auto& o : offsets) {
        const std::ptrdiff_t px = static_cast<std::ptrdiff_t>(x) + o.dx;
        const std::ptrdiff_t py = static_cast<std::ptrdiff_t>(y) + o.dy;
        if (px < 0 || py < 0 || px >= w || py >= h) continue;
        const std::uint64_t c = map.cells[static_cast<std::size_t>(py * w + px)];
        if (o.src) {
          r.n_src += c;
          ++r.src_pixels;
        } else {
          r.n_bak += c;
          ++r.bak_pixels;
        }
      }
      if (r.bak_pixels < options.min_bak_pixels) continue;

      const auto geom = sig::RegionGeometry::from_areas(static_cast<double>(r.src_pixels),
                                                        static_cast<double>(r.bak_pixels));
      r.f = geom.f();
      const CacheKey key{r.n_src, r.n_bak, r.src_pixels, r.bak_pixels};
      auto it = cache.find(key);
      if (it == cache.end()) {
        it = cache.emplace(key, sig::p_lampton({r.n_src, r.n_bak}, geom)).first;
      }
      r.log_p = it->second.log_p;
      r.p = it->second.p;
      r.sigma = it->second.sigma;
      if (options.trials_factor > 1) {
        r.log_p = std::min(0.0, r.log_p + log_trials);
        r.p = std::exp(r.log_p);
        r.sigma = sig::p_to_sigma(r.log_p);
      }
      out.push_back(r);
    }
  }
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<DetectionRecord> scan(const CountMap& map, const ApertureSpec& spec,
                                  const ScanOptions& options) {
  if (options.min_bak_pixels == 0) throw std::invalid_argument("min_bak_pixels must be positive");
  if (options.trials_factor == 0) throw std::invalid_argument("trials_factor must be positive");
  if (map.cells.size() != map.width * map.height) {
    throw std::invalid_argument("map cells do not match its dimensions");
  }
  const auto offsets = aperture_offsets(spec);
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(map.height, 1)));

  std::vector<std::vector<DetectionRecord>> parts(threads);
  if (threads == 1) {
    scan_rows(map, offsets, options, 0, map.height, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = map.height * t / threads;
      const std::size_t end = map.height * (t + 1) / threads;
      pool.emplace_back(scan_rows, std::cref(map), std::cref(offsets), std::cref(options), begin,
                        end, std::ref(parts[t]));
    }
    for (auto& th : pool) th.join();
  }

  std::vector<DetectionRecord> records;
  for (auto& part : parts) records.insert(records.end(), part.begin(), part.end());
  return records;
}

std::vector<DetectionRecord> threshold_detections(std::span<const DetectionRecord> records,
                                                  double sigma_min) {
  std::vector<DetectionRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const DetectionRecord& r) { return r.sigma >= sigma_min; });
  std::sort(out.begin(), out.end(), [](const DetectionRecord& a, const DetectionRecord& b) {
    if (a.sigma != b.sigma) return a.sigma > b.sigma;
    return std::tie(a.y, a.x) < std::tie(b.y, b.x);
  });
  return out;
}

std::string format_records(std::span<const DetectionRecord> records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.x) + ',' + std::to_string(r.y) + ',' + std::to_string(r.n_src) + ',' +
           std::to_string(r.n_bak) + ',' + fmt17(r.f) + ',' + fmt17(r.p) + ',' + fmt17(r.log_p) +
           ',' + fmt17(r.sigma) + '\n';
  }
  return out;
}

void write_records(std::ostream& os, std::span<const DetectionRecord> records) {
  os << format_records(records);
}

}  // namespace ptsrc::scan
