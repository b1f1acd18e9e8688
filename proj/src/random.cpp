#include "dppkm/random.hpp"

#include <numeric>

namespace dppkm {

std::size_t draw_weighted(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) return weights.size();
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  // round-off can leave target == acc at the end
  return last_positive;
}

Rng derive_rng(std::uint64_t master_seed, std::uint64_t run_index,
               std::uint64_t stream) {
  const std::uint64_t run_seed = master_seed + run_index;
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed),
                    static_cast<std::uint32_t>(run_seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace dppkm
