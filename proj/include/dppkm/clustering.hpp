#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dppkm/dpp.hpp"
#include "dppkm/kernels.hpp"
#include "dppkm/random.hpp"

namespace dppkm::clustering {

enum class SeedMethod { rand, pp, dpp, dppk, sequential };

std::string to_string(SeedMethod method);
SeedMethod parse_seed_method(const std::string& name);

/// Indices of the data points used as initial centroids.
struct SeedSet {
  std::vector<std::size_t> indices;
  SeedMethod method = SeedMethod::rand;
  std::size_t redraws = 0;  // empty DPP samples discarded before this one
  std::size_t uniform_fallbacks = 0;

  std::size_t inferred_k() const { return indices.size(); }
};

using SqDistance = std::function<double(std::size_t, std::size_t)>;

inline constexpr int kDefaultMaxIter = 300;
inline constexpr std::size_t kMaxEmptyRedraws = 100;

SeedSet init_random(std::size_t n, std::size_t k, Rng& rng);

/// D^2 seeding: uniform first seed, then each new seed with probability
/// proportional to the squared distance to its nearest chosen seed.
SeedSet init_kmeanspp(const SqDistance& dist2, std::size_t n, std::size_t k, Rng& rng);

/// Auto-k seeding from the spectral DPP sampler; empty draws are redrawn up
/// to kMaxEmptyRedraws times.
SeedSet init_dpp(const dpp::Sampler& sampler, Rng& rng);
SeedSet init_dpp(const kernels::GramMatrix& g, Rng& rng);

SeedSet init_kdpp(const dpp::Sampler& sampler, std::size_t k, Rng& rng);
SeedSet init_kdpp(const kernels::GramMatrix& g, std::size_t k, Rng& rng);

SeedSet init_sequential(const kernels::GramMatrix& g, std::size_t k, Rng& rng);

enum class Mode { vector, kernel };

struct Clustering {
  std::vector<std::size_t> assignments;
  Eigen::MatrixXd centroids;                     // vector mode, one row per cluster
  std::vector<std::vector<std::size_t>> members; // both modes
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  Mode mode = Mode::vector;
  std::vector<double> cost_history;  // cost after every iteration

  std::size_t k() const { return members.size(); }
};

/// Lloyd iterations in Euclidean space starting from centroids at the seed
/// points. Ties go to the lowest cluster id; an emptied cluster takes the
/// point farthest from its current centroid.
Clustering lloyd_vector(const Eigen::MatrixXd& points, const SeedSet& seeds,
                        int max_iter = kDefaultMaxIter);

/// Kernel k-means over a Gram matrix with the same rules as lloyd_vector.
Clustering lloyd_kernel(const kernels::GramMatrix& g, const SeedSet& seeds,
                        int max_iter = kDefaultMaxIter);

/// Sum of squared distances to the mean of each assigned cluster,
/// recomputed from scratch.
double vector_cost(const Eigen::MatrixXd& points, std::span<const std::size_t> assignments,
                   std::size_t k);
double kernel_cost(const kernels::GramMatrix& g, std::span<const std::size_t> assignments,
                   std::size_t k);

}  // namespace dppkm::clustering
