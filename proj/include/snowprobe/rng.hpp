#pragma once

#include <cstdint>

namespace snowprobe {

// Counter-based 64-bit generator: draw k of stream(seed) is
// mix(seed + (k+1) * 0x9e3779b97f4a7c15) with the splitmix64 finalizer.
// Pure integer arithmetic, so identical seeds reproduce identical samples
// on any platform or language; see README for the reference definition.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits; (z >> 11) * 2^-53 is exact.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Uniform in [0, n) via the 128-bit multiply-shift reduction.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace snowprobe
