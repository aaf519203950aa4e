#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace scp {

// Counter-based generator: every draw is a pure function of
// (seed, stream key, counter), so independent substreams can be created
// anywhere without sharing state.

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Domains keep substreams of different subsystems disjoint.
enum class StreamDomain : std::uint64_t {
  clock = 1,
  cascade = 2,
  gillespie = 3,
  initial = 4,
  branching = 5,
  percolation = 6,
  replica = 7,
  generic = 8,
};

constexpr std::uint64_t stream_key(StreamDomain domain, std::uint64_t a,
                                   std::uint64_t b = 0) noexcept {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(domain) * 0xd1b54a32d192ed03ULL);
  h = splitmix64(h ^ a);
  return splitmix64(h ^ (b * 0x8cb92ba72f3d8dd7ULL));
}

constexpr std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t key,
                                     std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ key) ^ counter);
}

/// A substream usable as a UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng() = default;
  constexpr CounterRng(std::uint64_t seed, std::uint64_t key,
                       std::uint64_t counter = 0) noexcept
      : seed_(seed), key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    return counter_draw(seed_, key_, counter_++);
  }

  /// Uniform on (0, 1); never returns 0 so log() is safe.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift with rejection for exact uniformity.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace scp
