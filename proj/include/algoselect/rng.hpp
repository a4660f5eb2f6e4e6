#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string_view>

namespace algoselect {

// Deterministic random source with an explicit 64-bit seed. Every randomized
// operation takes one of these by reference; there is no global RNG. Derived
// draws are built directly on the raw 64-bit output so sequences replay
// bit-identically regardless of standard-library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in the open interval (0, 1); never exactly 0 or 1.
  double open01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Unbiased integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    const double u = open01();
    const double v = open01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  // Standard Gumbel(0, 1): -ln(-ln(U)) with U in (0, 1).
  double gumbel() { return -std::log(-std::log(open01())); }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive per-cell seeds from labeled contexts.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::string_view value) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const char c : value) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return hash_combine(seed, h);
}

}  // namespace algoselect
