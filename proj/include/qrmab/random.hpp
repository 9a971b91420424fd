#pragma once

#include <cstdint>
#include <random>

namespace qrmab {

/// Pseudo-random engine used for every stochastic draw in a run.
using Engine = std::mt19937_64;

/// Independent roles inside one run. Each role owns its own engine so that
/// changing how often one role draws never shifts the draws of another.
enum class Stream : std::uint64_t {
  thetas = 1,
  rewards = 2,
  admission = 3,
  service = 4,
  sampling = 5,
  agent = 6,
  replay = 7,
  random_play = 8,
};

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Engine for one role of the run identified by `run_seed`.
inline Engine make_engine(std::uint64_t run_seed, Stream role) {
  return Engine{mix64(mix64(run_seed) ^ static_cast<std::uint64_t>(role))};
}

/// True with probability p. Consumes exactly one canonical draw.
inline bool bernoulli(Engine& rng, double p) {
  return std::bernoulli_distribution{p}(rng);
}

}  // namespace qrmab
