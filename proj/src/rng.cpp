#include "halnum/rng.hpp"

#include <cmath>
#include <numbers>

namespace halnum {

std::uint64_t mix_draw(std::uint64_t seed, std::uint64_t n) {
  std::uint64_t z = seed + n * 0x9E3779B97F4A7C15ULL;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double mix_uniform(std::uint64_t seed, std::uint64_t n) {
  return static_cast<double>(mix_draw(seed, n) >> 11) * 0x1.0p-53;
}

std::complex<double> steinhaus_value(std::uint64_t seed, std::uint64_t p) {
  const double u = mix_uniform(seed, p);
  return std::polar(1.0, 2.0 * std::numbers::pi * u);
}

double rademacher_value(std::uint64_t seed, std::uint64_t p) {
  return (mix_draw(seed, p) >> 63) ? -1.0 : 1.0;
}

}  // namespace halnum
