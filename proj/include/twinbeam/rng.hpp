#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace twinbeam {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic standard-normal stream keyed by (seed, stream).  Workers draw
// from disjoint streams, so a result assembled from per-chunk streams is
// identical for any worker count.  xoshiro-free: splitmix64 state walk plus a
// hand-rolled Box-Muller keeps the sequence identical across platforms.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
    std::uint64_t b = splitmix64(s);
    state_ = a ^ (b + 0x2545f4914f6cdd1dull + (stream << 1));
    if (state_ == 0) state_ = 0x853c49e6748fea9bull;
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // (0,1] uniforms so log() stays finite.
    const double u1 =
        (static_cast<double>(splitmix64(state_) >> 11) + 1.0) * 0x1p-53;
    const double u2 =
        static_cast<double>(splitmix64(state_) >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  std::uint64_t state_ = 1;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace twinbeam
