#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace entmom::mc {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// the output block is a pure function of (counter, key).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Substream (seed, stream) of Philox blocks. The seed is the key; the stream
/// index and a 64-bit block index make up the counter.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

  Philox4x32::Counter next_block() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                                  stream_, 0u};
    ++index_;
    return Philox4x32::block(ctr, key_);
  }

  /// One standard complex normal (E|z|² = 1) from a single block by Box–Muller.
  std::array<double, 2> complex_normal() {
    const auto b = next_block();
    const double u1 = to_unit_open(b[0], b[1]);
    const double u2 = to_unit_open(b[2], b[3]);
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  std::uint64_t blocks_used() const { return index_; }

  /// Uniform on (0, 1] with 53 random bits.
  static double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t index_ = 0;
};

}  // namespace entmom::mc
