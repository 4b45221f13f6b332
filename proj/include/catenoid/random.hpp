#pragma once

// Reproducible random numbers. std::mt19937_64 has a standard-fixed output sequence;
// doubles are built from its top 53 bits, so results match across compilers and
// standard libraries (std::uniform_real_distribution does not guarantee that).

#include <cstdint>
#include <random>

namespace catenoid {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace catenoid
