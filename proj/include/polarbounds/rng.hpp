#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace polarbounds {

// SplitMix64: tiny, fast, and bit-reproducible across platforms, which the
// std distributions are not. All randomness in the project flows through it.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform angle in [0, 2*pi).
  double angle() { return uniform() * 6.283185307179586476925286766559; }

  std::complex<double> unit_phase() {
    const double t = angle();
    return {std::cos(t), std::sin(t)};
  }

 private:
  std::uint64_t state_;
};

// Order-independent sub-seed derivation: the same (master, a, b) always maps
// to the same stream, so parallel workers agree with the serial schedule.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t a,
                              std::uint64_t b = 0) {
  SplitMix64 mix(master ^ (a * 0x9e3779b97f4a7c15ull) ^
                 (b * 0xc2b2ae3d27d4eb4full));
  mix.next();
  return mix.next();
}

}  // namespace polarbounds
