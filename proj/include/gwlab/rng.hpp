#pragma once

#include <cstdint>

namespace gwlab {

// PCG-XSH-RR 64/32 (O'Neill's minimal pcg32). Chosen because distinct
// stream selectors give provably distinct, statistically independent
// sequences, which is what replica-parallel sampling needs. All draws in
// this project go through this generator so that (seed, stream) pins the
// output bit-for-bit on every platform; std::* distributions are avoided
// for the same reason.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    next();
    state_ += seed;
    next();
  }

  std::uint32_t next() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

// One reproducible stream of randomness: identical (seed, stream) pairs
// yield identical draw sequences, distinct streams are independent.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : gen_(seed, stream), seed_(seed), stream_(stream) {}

  std::uint32_t next_u32() { return gen_.next(); }

  std::uint64_t next_u64() {
    std::uint64_t hi = gen_.next();
    return (hi << 32) | gen_.next();
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); never returns an endpoint, safe under log().
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased draw from {0, ..., n-1} (Lemire's method).
  std::uint32_t below(std::uint32_t n) {
    std::uint64_t x = next_u32();
    std::uint64_t m = x * n;
    auto lo = static_cast<std::uint32_t>(m);
    if (lo < n) {
      std::uint32_t threshold = (0u - n) % n;
      while (lo < threshold) {
        x = next_u32();
        m = x * n;
        lo = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  Pcg32 gen_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace gwlab
