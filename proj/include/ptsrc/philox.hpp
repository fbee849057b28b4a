#pragma once

#include <array>
#include <cstdint>

namespace ptsrc::nullsim {

/// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// An independent random stream addressed by (seed, stream_index). Draws are
/// a pure function of the address and the draw position, so a stream can be
/// recreated anywhere, on any thread.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

  std::uint32_t next_u32() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double next_uniform() noexcept;

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace ptsrc::nullsim
