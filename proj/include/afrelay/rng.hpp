// SPDX-License-Identifier: Apache-2.0
//
// xoshiro256** (Blackman & Vigna, 2018) seeded through splitmix64. Streams are
// fully specified by the seed, independent of the standard library, so seeded
// runs reproduce across compilers. Normal variates use the Box-Muller
// transform; no values are cached between calls.
#pragma once

#include <array>
#include <cstdint>

namespace afrelay {

std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes two 64-bit words into one; used to derive per-trial seeds.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

class Xoshiro256 {
public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal.
  double normal();

private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace afrelay
