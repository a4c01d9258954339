#pragma once

#include <cstdint>
#include <random>

namespace cho {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamKind : std::uint64_t { Mobility = 1, Link = 2, Measurement = 3 };

/// Derives an independent engine seed for one (run seed, stream kind, owner,
/// sub-owner) tuple. Streams never share state, so per-UE and per-link draws
/// do not depend on evaluation order.
constexpr std::uint64_t stream_seed(std::uint64_t base, StreamKind kind, std::uint64_t a,
                                    std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  h = splitmix64(h ^ a);
  return splitmix64(h ^ (b * 0x100000001b3ULL));
}

inline Rng make_stream(std::uint64_t base, StreamKind kind, std::uint64_t a, std::uint64_t b = 0) {
  return Rng{stream_seed(base, kind, a, b)};
}

}  // namespace cho
