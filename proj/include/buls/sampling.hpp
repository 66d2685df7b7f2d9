#pragma once

// Exact simulation through the stochastic representation
// Z1 = R D U1, Z2 = R sqrt(1 - D^2) U2.

#include <array>
#include <cstdint>
#include <limits>

#include "buls/core.hpp"

namespace buls {

/// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// One draw of (Z1, Z2) with density g(z1^2 + z2^2) / Z, using the mixture
/// fast paths where they exist.
std::array<double, 2> sample_z_pair(const Generator& gen, RandomSource& rng);

/// Same law through the generic route: R^2 from the radial quantile,
/// D = sin(pi V / 2), random signs. Used to cross-check the fast paths.
std::array<double, 2> sample_z_pair_generic(const Generator& gen, RandomSource& rng);

BivariateDataset sample_buls(const Generator& gen, const ModelParams& theta, std::size_t n, RandomSource& rng);

}  // namespace buls
