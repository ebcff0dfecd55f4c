#pragma once
// Deterministic random numbers. mt19937_64 has a fixed cross-platform
// stream; the float mapping below is fixed too, so seeded runs reproduce
// bit-identically everywhere.

#include "qde/scalars.hpp"

#include <cstdint>
#include <random>

namespace qde {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  real next_unit() {
    return static_cast<real>(ldexp(static_cast<double>(eng_() >> 11), -53));
  }

  real uniform(real lo, real hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace qde
