#pragma once

#include <complex>
#include <cstdint>

namespace halnum {

// Fixed 64-bit mixing generator behind the random multiplicative models.
// The contract is part of the reproducibility surface and must never change:
//
//   state(seed, n) = seed + n * 0x9E3779B97F4A7C15            (mod 2^64)
//   mix(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//            z ^= z >> 27;  z *= 0x94D049BB133111EB;  z ^= z >> 31;
//   draw(seed, n) = mix(state(seed, n))
//
// Identical (seed, n) give identical draws on every platform and run.
std::uint64_t mix_draw(std::uint64_t seed, std::uint64_t n);

// Uniform in [0, 1): the top 53 bits of mix_draw scaled by 2^-53.
double mix_uniform(std::uint64_t seed, std::uint64_t n);

// Random unit-circle value: exp(2*pi*i * mix_uniform(seed, p)).
std::complex<double> steinhaus_value(std::uint64_t seed, std::uint64_t p);

// Random sign in {-1, +1}: +1 iff the top bit of mix_draw(seed, p) is 0.
double rademacher_value(std::uint64_t seed, std::uint64_t p);

}  // namespace halnum
