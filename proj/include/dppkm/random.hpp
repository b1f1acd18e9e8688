#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dppkm {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) using the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

// Draws an index with probability proportional to weights[i] (all >= 0).
// Returns weights.size() when the total mass is zero.
std::size_t draw_weighted(std::span<const double> weights, Rng& rng);

// Generator for one (run, stream) pair of a seeded multi-run protocol.
// The run seed is master_seed + run_index; stream separates the methods
// that share a run.
Rng derive_rng(std::uint64_t master_seed, std::uint64_t run_index,
               std::uint64_t stream = 0);

}  // namespace dppkm
