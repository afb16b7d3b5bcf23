#ifndef GRANTMINE_RANDOM_H_
#define GRANTMINE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace grantmine {

using Rng = std::mt19937_64;

// Derives an independent 64-bit seed for sub-stream `stream` of `seed`
// (SplitMix64 finalizer over both words). Every randomized component pulls its
// generator from here so one top-level seed fixes all downstream draws.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(DeriveSeed(seed, stream));
}

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound must be > 0.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound);

// 64-bit FNV-1a; stable across platforms, used for config and vocabulary
// fingerprints.
std::uint64_t Fnv1a64(std::string_view bytes);

}  // namespace grantmine

#endif  // GRANTMINE_RANDOM_H_
