#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptsrc {

// An iterative special-function evaluation ran out of its iteration budget.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An infinite series never reached a contracting term ratio.
class TruncationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometric remainder bound requested where successive term ratios are >= 1.
class RatioNotContracting : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed count-map cell; row and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& reason)
      : std::runtime_error("line " + std::to_string(row) + ", column " +
                           std::to_string(col) + ": " + reason),
        row_(row),
        col_(col),
        reason_(reason) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t row_;
  std::size_t col_;
  std::string reason_;
};

}  // namespace ptsrc
