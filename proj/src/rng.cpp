#include "wasp/rng.hpp"

#include <cassert>
#include <cmath>

namespace wasp {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  assert(lo < hi);
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  // u1 is shifted into (0, 1] so the log argument never vanishes.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

double Rng::rademacher() {
  return (gen_() & 1ull) ? 1.0 : -1.0;
}

std::uint64_t Rng::index(std::uint64_t n) {
  assert(n > 0);
  // Modulo bias is below 2^-50 for every n used in this library.
  return gen_() % n;
}

}  // namespace wasp
