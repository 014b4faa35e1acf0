#pragma once

#include <cstdint>
#include <random>

namespace psirec {

/// Salts that keep the random streams of different stages apart even when
/// they are driven by the same seed value.
enum class StreamTag : std::uint64_t {
  kSplit = 0x51,
  kSparsify = 0x52,
  kWalk = 0x53,
  kFactorInit = 0x54,
  kSynthetic = 0x55,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator keyed by (seed, tag, parts...). Two calls with the same
/// key always yield the same sequence, whichever thread makes them.
template <class... Parts>
std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, Parts... parts) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag)));
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(parts))), ...);
  return std::mt19937_64(h);
}

}  // namespace psirec
