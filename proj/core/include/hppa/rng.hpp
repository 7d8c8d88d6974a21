#pragma once

#include <array>
#include <cstdint>

namespace hppa {

/// xoshiro256** seeded through splitmix64.
///
/// Sequences are fully determined by the 64-bit seed and the published
/// algorithms, so they reproduce across compilers and standard libraries
/// (unlike std::normal_distribution and friends).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer on [0, n).
  int uniform_int(int n);
  // Standard normal via Box-Muller; no cached second variate.
  double normal();

  static std::uint64_t splitmix64(std::uint64_t& state);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace hppa
