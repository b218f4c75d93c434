#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace valuekit {

// Portable deterministic randomness. std::mt19937_64's raw output sequence is
// fully specified by the standard; the distribution adaptors are not, so the
// bounded draw and shuffle are implemented here to keep byte-identical output
// across platforms and standard libraries.

// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform real in [0, 1) with 53 random bits.
inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates shuffle using bounded_rand.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_rand(rng, i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

// 64-bit FNV-1a over arbitrary bytes, optionally seeded. Fixed constants keep
// hashed feature indices and cache file names identical everywhere.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace valuekit
