#pragma once

#include <cmath>
#include <cstdint>

namespace catube {

// Counter-based splittable generator. Output depends only on
// (seed, stream, counter), so every draw is reproducible across platforms
// and independent of call sites holding other streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  // Independent stream derived from this one; does not disturb the parent.
  CounterRng split(std::uint64_t substream) const {
    return CounterRng(seed_, mix(stream_ + 0x632be59bd9b4e019ULL + substream));
  }

  std::uint64_t next_u64() {
    return mix(mix(seed_ + 0x9e3779b97f4a7c15ULL) ^ mix(stream_) ^ counter_++);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (pairs cached).
  double next_gauss() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace catube
