#pragma once

#include <cstdint>
#include <random>

namespace wasp {

// Mixes a base seed with a stream tag (splitmix64 finalizer) so that
// generators derived from one master seed are decorrelated.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept;

// Seeded random source with explicit bit mappings. std::*_distribution is
// implementation-defined, so every draw here is built directly from raw
// mt19937_64 output: identical seeds give identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  // Uniform on [lo, hi). Requires lo < hi.
  double uniform(double lo, double hi);
  // Standard Gaussian via Box-Muller (two uniforms per draw, no cached spare).
  double normal();
  // -1.0 or +1.0 with equal probability.
  double rademacher();
  // Uniform on {0, ..., n-1}. Requires n > 0.
  std::uint64_t index(std::uint64_t n);

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace wasp
