#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace entroad {

/// Seeded generator whose draws are bit-identical across platforms: only the
/// raw mt19937_64 stream is used, never the implementation-defined
/// std::*_distribution adaptors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform in {0, ..., n-1}.
  std::uint64_t index(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  /// Unit-rate exponential.
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace entroad
