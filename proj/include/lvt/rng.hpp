#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace lvt {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent stream seed for (master, index, salt).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t salt = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ salt);
}

inline double uniform01(Rng& rng) {
  // 53 random mantissa bits, identical across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller normal draw; spelled out so sequences do not depend on the
/// standard library's distribution implementation.
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace lvt
