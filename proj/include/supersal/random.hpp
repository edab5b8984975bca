#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace supersal {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the derived draws below use explicit
// formulas so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). Multiply-shift reduction; bias is below n / 2^64.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform float in [0, 1) with 24 random bits; never rounds up to 1.
  float uniform01f() { return static_cast<float>(engine_() >> 40) * 0x1.0p-24f; }

  // Standard normal via Box-Muller (one value per call).
  double normal() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child seed for a (master, key...) tuple, e.g. derive_seed(seed, clip_id, "sp", "sauc").
template <typename... Keys>
std::uint64_t derive_seed(std::uint64_t master, const Keys&... keys) {
  std::uint64_t h = splitmix64(master);
  ((h = splitmix64(h ^ fnv1a(std::string_view(keys)))), ...);
  return h;
}

inline std::uint64_t derive_seed_index(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0x9e3779b97f4a7c15ULL + 1));
}

}  // namespace supersal
