#pragma once

#include <cstdint>
#include <random>

namespace virtimu {

using Rng = std::mt19937_64;

/// splitmix64 finalizer. Used to derive statistically independent stream
/// seeds from a master seed so concurrent consumers (placements, trees,
/// fold/run cells) stay schedule-independent.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed) { return mix64(seed); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t next, Rest... rest) {
  return derive_seed(mix64(seed ^ mix64(next)), rest...);
}

/// Stable tag for naming a seed stream ("noise", "forest", ...). FNV-1a.
constexpr std::uint64_t seed_tag(const char* name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* p = name; *p; ++p) h = (h ^ static_cast<std::uint64_t>(*p)) * 0x100000001b3ULL;
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace virtimu
