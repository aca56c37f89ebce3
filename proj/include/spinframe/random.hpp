#pragma once

#include <cstdint>
#include <random>

namespace spinframe {

/// Explicit random stream. Never global: callers own and pass their streams.
using RandomStream = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for sub-task `index` of a run seeded with `seed`.
/// Streams depend only on (seed, index), never on scheduling.
inline RandomStream make_stream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace spinframe
