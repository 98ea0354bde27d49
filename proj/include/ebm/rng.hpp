// SPDX-License-Identifier: Apache-2.0
#pragma once

// Counter-based random streams. Every (seed, stream, path) triple addresses
// an independent Philox4x32-10 sequence, so a path's draws do not depend on
// which worker simulates it or in what order.
//
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.

#include <array>
#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <limits>

namespace ebm {

/// Stream tags keep simulators that share a seed statistically independent.
enum class Stream : std::uint32_t {
  kEllipsoid = 1,
  kYMarginal = 2,
  kWrightFisher = 3,
  kSphere = 4,
  kTest = 99,
};

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57;
  static constexpr std::uint32_t kW0 = 0x9E3779B9;
  static constexpr std::uint32_t kW1 = 0xBB67AE85;

  static Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Standard-normal and uniform draws for one simulated path. Satisfies
/// UniformRandomBitGenerator with 64-bit outputs; normals come from Boost's
/// ziggurat sampler, which is header-only and therefore bit-reproducible.
class PathRng {
 public:
  using result_type = std::uint64_t;

  PathRng(std::uint64_t seed, Stream stream, std::uint64_t path) {
    const std::uint64_t k =
        splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    path_lo_ = static_cast<std::uint32_t>(path);
    path_hi_ = static_cast<std::uint32_t>(path >> 32);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (word_ == 4) refill();
    const std::uint64_t hi = buf_[word_];
    const std::uint64_t lo = buf_[word_ + 1];
    word_ += 2;
    return (hi << 32) | lo;
  }

  /// Uniform on (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

 private:
  void refill() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32),
                                  path_lo_, path_hi_};
    buf_ = Philox4x32::block(ctr, key_);
    ++block_;
    word_ = 0;
  }

  Philox4x32::Key key_{};
  std::uint32_t path_lo_ = 0;
  std::uint32_t path_hi_ = 0;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int word_ = 4;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace ebm
