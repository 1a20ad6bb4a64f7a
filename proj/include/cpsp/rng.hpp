// SplitMix64 (Steele, Lea, Flood 2014).  Output depends only on the seed, so
// generated instances are identical across platforms and compilers.
#pragma once

#include <cstdint>

namespace cpsp {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Independent child stream; advances this generator by one step.
  SplitMix64 split() { return SplitMix64((*this)() ^ 0x6a09e667f3bcc909ULL); }

  // Uniform integer in [0, bound).  Rejection sampling keeps it unbiased and
  // independent of any standard-library distribution implementation.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t v;
    do v = (*this)();
    while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cpsp
