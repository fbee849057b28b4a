#pragma once

// Sliding-aperture point-source scan over a 2-D count map.
//
// At every pixel the source region is the disk of pixels whose centres lie
// within r_src, the background region the annulus r_in < d <= r_out, both
// clipped to the map. f is the exact pixel-count ratio |src|/(|src|+|bak|).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptsrc::scan {

struct CountMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint64_t> cells;  // row-major, y * width + x

  static CountMap zeros(std::size_t width, std::size_t height);

  std::uint64_t& at(std::size_t x, std::size_t y) { return cells[y * width + x]; }
  std::uint64_t at(std::size_t x, std::size_t y) const { return cells[y * width + x]; }
  std::uint64_t total() const;

  bool operator==(const CountMap&) const = default;
};

/// Parses the CSV grid: one row per line, comma-separated non-negative
/// integers, LF or CRLF. Throws ParseError(row, col, reason).
CountMap parse_map(std::string_view text);

/// Throws IoError when the file cannot be read, ParseError on bad content.
CountMap load_map(const std::filesystem::path& path);

std::string format_map(const CountMap& map);
void write_map(const std::filesystem::path& path, const CountMap& map);

struct ApertureSpec {
  double r_src = 1.0;
  double r_in = 2.0;
  double r_out = 4.0;

  /// Throws std::invalid_argument unless 0 < r_src <= r_in < r_out.
  static ApertureSpec make(double r_src, double r_in, double r_out);
};

struct PixelIndex {
  std::size_t x = 0;
  std::size_t y = 0;

  auto operator<=>(const PixelIndex&) const = default;
};

struct PixelRegions {
  std::vector<PixelIndex> src;  // row-major order
  std::vector<PixelIndex> bak;
};

/// Throws std::out_of_range when center is off the map.
PixelRegions pixel_regions(std::size_t width, std::size_t height, PixelIndex center,
                           const ApertureSpec& spec);

struct DetectionRecord {
  std::size_t x = 0;
  std::size_t y = 0;
  std::uint64_t n_src = 0;
  std::uint64_t n_bak = 0;
  std::uint64_t src_pixels = 0;
  std::uint64_t bak_pixels = 0;
  double f = 0.0;
  double p = 1.0;
  double log_p = 0.0;
  double sigma = 0.0;
};

struct ScanOptions {
  std::uint64_t min_bak_pixels = 8;
  std::uint64_t trials_factor = 1;  // p multiplied by this, capped at 1
  unsigned threads = 1;
};

/// One record per pixel with at least min_bak_pixels background pixels,
/// in row-major order for any thread count.
std::vector<DetectionRecord> scan(const CountMap& map, const ApertureSpec& spec,
                                  const ScanOptions& options = {});

/// Records with sigma >= sigma_min, by sigma descending then (y, x).
std::vector<DetectionRecord> threshold_detections(std::span<const DetectionRecord> records,
                                                  double sigma_min);

inline constexpr std::string_view kRecordHeader = "x,y,n_src,n_bak,f,p,log_p,sigma";

/// Header line plus one line per record; floats with 17 significant digits.
std::string format_records(std::span<const DetectionRecord> records);
void write_records(std::ostream& os, std::span<const DetectionRecord> records);

// ---- synthetic maps (seeded counter streams) --------------------------------

/// Independent Poisson(mu) counts per pixel; pixel i uses stream i.
CountMap simulate_background(std::size_t width, std::size_t height, double mu,
                             std::uint64_t seed);

/// Adds `counts` events, each placed uniformly on a pixel of the clipped
/// center-in-disk region of radius `radius` around `center`.
void inject_source(CountMap& map, PixelIndex center, double radius, std::uint64_t counts,
                   std::uint64_t seed);

}  // namespace ptsrc::scan
