#include "ironq/rng.hpp"

#include "ironq/special.hpp"

namespace ironq {

double Rng::normal() { return special::normal_quantile(uniform01()); }

namespace {

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix(mix(base) ^ mix(index + 0x632be59bd9b4e019ULL));
}

}  // namespace ironq
