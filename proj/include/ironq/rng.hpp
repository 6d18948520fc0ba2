#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ironq {

// Deterministic uniform stream. mt19937_64 has a standard-mandated sequence,
// and the (0,1) mapping below avoids std::uniform_real_distribution, whose
// output is implementation-defined. Reproducibility across platforms depends
// on both.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Strictly inside (0,1): ((x >> 11) + 0.5) * 2^-53.
  double uniform01() {
    const std::uint64_t x = engine_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via inverse transform (see special::normal_quantile).
  double normal();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Splittable per-task seed: splitmix64 mix of (base, index). Distinct indices
// give statistically independent streams for parallel replicates.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace ironq
