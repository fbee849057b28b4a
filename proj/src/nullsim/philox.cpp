#include "ptsrc/philox.hpp"

namespace ptsrc::nullsim {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void round(PhiloxCounter& c, const PhiloxKey& k) noexcept {
  const std::uint64_t p0 = std::uint64_t{kMulA} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMulB} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    round(counter, key);
  }
  return counter;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream_index) {}

std::uint32_t CounterStream::next_u32() noexcept {
  if (used_ == 4) {
    // counter words: stream index (low, high), block number (low, high)
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(stream_),
                             static_cast<std::uint32_t>(stream_ >> 32),
                             static_cast<std::uint32_t>(block_),
                             static_cast<std::uint32_t>(block_ >> 32)},
                            key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

double CounterStream::next_uniform() noexcept {
  const std::uint64_t hi = next_u32() >> 5;  // 27 bits
  const std::uint64_t lo = next_u32() >> 6;  // 26 bits
  const std::uint64_t bits = (hi << 26) | lo;
  // (bits + 0.5) / 2^53 never hits 0 or 1
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace ptsrc::nullsim
