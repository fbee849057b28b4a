#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ptsrc/errors.hpp"
#include "ptsrc/scan.hpp"

namespace ptsrc::scan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_cell(std::string_view raw, std::size_t row, std::size_t col) {
  const std::string_view cell = trim(raw);
  if (cell.empty()) throw ParseError(row, col, "empty cell");
  if (cell.front() == '-') throw ParseError(row, col, "negative count '" + std::string(cell) + "'");
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(row, col, "count out of range '" + std::string(cell) + "'");
  }
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    const bool fractional = ec == std::errc() && (*ptr == '.' || *ptr == 'e' || *ptr == 'E');
    throw ParseError(row, col,
                     (fractional ? "fractional count '" : "not a non-negative integer '") +
                         std::string(cell) + "'");
  }
  return value;
}

}  // namespace

CountMap CountMap::zeros(std::size_t width, std::size_t height) {
  return CountMap{width, height, std::vector<std::uint64_t>(width * height, 0)};
}

std::uint64_t CountMap::total() const {
  return std::accumulate(cells.begin(), cells.end(), std::uint64_t{0});
}

CountMap parse_map(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  CountMap map;
  std::size_t row = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.ends_with('\r')) line.remove_suffix(1);
    ++row;
    if (trim(line).empty()) {
      // A single trailing newline is fine; blank lines inside the grid are not.
      if (text.empty()) break;
      throw ParseError(row, 1, "empty row");
    }

    std::size_t col = 0;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      ++col;
      map.cells.push_back(parse_cell(line.substr(start, comma - start), row, col));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row == 1) {
      map.width = col;
    } else if (col != map.width) {
      throw ParseError(row, std::min(col + 1, map.width + 1),
                       "row has " + std::to_string(col) + " cells, expected " +
                           std::to_string(map.width));
    }
  }
  if (row == 0 || map.cells.empty()) throw ParseError(1, 1, "empty map");
  map.height = map.cells.size() / map.width;
  return map;
}

CountMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open map file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading map file '" + path.string() + "'");
  return parse_map(buf.str());
}

std::string format_map(const CountMap& map) {
  std::string out;
  out.reserve(map.cells.size() * 3);
  char buf[24];
  for (std::size_t y = 0; y < map.height; ++y) {
    for (std::size_t x = 0; x < map.width; ++x) {
      if (x) out += ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, map.at(x, y));
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

void write_map(const std::filesystem::path& path, const CountMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write map file '" + path.string() + "'");
  out << format_map(map);
  if (!out) throw IoError("error writing map file '" + path.string() + "'");
}

}  // namespace ptsrc::scan
