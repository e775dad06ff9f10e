#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace collab {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a. Stable across platforms and runs.
constexpr std::uint64_t fnv1a(std::string_view s,
                              std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one independent work item. Every randomized step derives its
/// stream from (global seed, key, replicate) so results do not depend on
/// scheduling order or worker count.
constexpr std::uint64_t derive_seed(std::uint64_t global_seed,
                                    std::string_view key,
                                    std::uint64_t replicate = 0) {
  return splitmix64(splitmix64(global_seed ^ fnv1a(key)) + replicate);
}

/// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace collab
