#include "grantmine/random.h"

namespace grantmine {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL));
}

__extension__ typedef unsigned __int128 Uint128;

std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound) {
  // Lemire multiply-shift with rejection; output is library-independent.
  const std::uint64_t limit = -bound % bound;
  for (;;) {
    const std::uint64_t x = rng();
    const Uint128 m = static_cast<Uint128>(x) * bound;
    if (static_cast<std::uint64_t>(m) >= limit) {
      return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace grantmine
