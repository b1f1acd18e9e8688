#include "dppkm/clustering.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dppkm/errors.hpp"

namespace dppkm::clustering {

namespace {

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

void validate_seeds(const SeedSet& seeds, std::size_t n) {
  if (seeds.indices.empty()) throw InvalidInput("lloyd: seed set is empty");
  std::vector<bool> seen(n, false);
  for (std::size_t i : seeds.indices) {
    if (i >= n) throw InvalidInput("lloyd: seed index " + std::to_string(i) + " out of range");
    if (seen[i]) throw InvalidInput("lloyd: duplicate seed index " + std::to_string(i));
    seen[i] = true;
  }
}

// Index of the minimum entry of each row, lowest column on ties.
std::vector<std::size_t> nearest(const Eigen::MatrixXd& dist) {
  std::vector<std::size_t> out(static_cast<std::size_t>(dist.rows()));
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < dist.cols(); ++j) {
      if (dist(i, j) < dist(i, best)) best = j;
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return out;
}

// Moves the farthest point (from its current center) into every empty
// cluster, never emptying a donor. Returns the points that moved.
std::vector<std::size_t> repair_empty(std::vector<std::size_t>& assign, const Eigen::MatrixXd& dist,
                                      std::size_t k) {
  std::vector<std::size_t> count(k, 0);
  for (std::size_t c : assign) ++count[c];
  std::vector<bool> moved(assign.size(), false);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < k; ++j) {
    if (count[j] > 0) continue;
    std::size_t far = assign.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (moved[i] || count[assign[i]] < 2) continue;
      const double d = dist(as_index(i), as_index(assign[i]));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == assign.size()) break;  // k > n cannot happen with valid seeds
    --count[assign[far]];
    assign[far] = j;
    ++count[j];
    moved[far] = true;
    out.push_back(far);
  }
  return out;
}

std::vector<std::vector<std::size_t>> group(std::span<const std::size_t> assign, std::size_t k) {
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < assign.size(); ++i) members[assign[i]].push_back(i);
  return members;
}

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points, std::span<const std::size_t> assign,
                              std::size_t k) {
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(as_index(k), points.cols());
  std::vector<double> count(k, 0.0);
  for (std::size_t i = 0; i < assign.size(); ++i) {
    means.row(as_index(assign[i])) += points.row(as_index(i));
    count[assign[i]] += 1.0;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (count[j] > 0.0) means.row(as_index(j)) /= count[j];
  }
  return means;
}

// Squared feature-space distance from every point to every cluster mean.
Eigen::MatrixXd kernel_distances(const Eigen::MatrixXd& kmat,
                                 const std::vector<std::vector<std::size_t>>& members) {
  const Eigen::Index n = kmat.rows();
  const auto k = as_index(members.size());
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& c = members[static_cast<std::size_t>(j)];
    for (std::size_t i : c) weights(as_index(i), j) = 1.0 / static_cast<double>(c.size());
  }
  const Eigen::MatrixXd cross = kmat * weights;  // (1/|C|) sum_l K(i,l)
  Eigen::VectorXd self(k);
  for (Eigen::Index j = 0; j < k; ++j) self(j) = weights.col(j).dot(cross.col(j));

  Eigen::MatrixXd dist(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double d = members[static_cast<std::size_t>(j)].empty()
                           ? std::numeric_limits<double>::infinity()
                           : kmat(i, i) - 2.0 * cross(i, j) + self(j);
      dist(i, j) = std::max(0.0, d);
    }
  }
  return dist;
}

}  // namespace

std::string to_string(SeedMethod method) {
  switch (method) {
    case SeedMethod::rand: return "rand";
    case SeedMethod::pp: return "pp";
    case SeedMethod::dpp: return "dpp";
    case SeedMethod::dppk: return "dppk";
    case SeedMethod::sequential: return "sequential";
  }
  return "unknown";
}

SeedMethod parse_seed_method(const std::string& name) {
  if (name == "rand") return SeedMethod::rand;
  if (name == "pp") return SeedMethod::pp;
  if (name == "dpp") return SeedMethod::dpp;
  if (name == "dppk") return SeedMethod::dppk;
  if (name == "sequential") return SeedMethod::sequential;
  throw InvalidInput("unknown seeding method '" + name + "'");
}

SeedSet init_random(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0 || k > n) {
    throw InvalidInput("init_random: need 1 <= k <= n, got k = " + std::to_string(k) +
                       ", n = " + std::to_string(n));
  }
  // partial Fisher-Yates
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(n - i, rng);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return SeedSet{std::move(pool), SeedMethod::rand};
}

SeedSet init_kmeanspp(const SqDistance& dist2, std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0 || k > n) {
    throw InvalidInput("init_kmeanspp: need 1 <= k <= n, got k = " + std::to_string(k) +
                       ", n = " + std::to_string(n));
  }
  SeedSet seeds{{uniform_index(n, rng)}, SeedMethod::pp};
  std::vector<double> nearest_d2(n);
  for (std::size_t i = 0; i < n; ++i) nearest_d2[i] = dist2(i, seeds.indices[0]);
  while (seeds.indices.size() < k) {
    const std::size_t pick = draw_weighted(nearest_d2, rng);
    if (pick == n) {
      throw DegenerateDataError("init_kmeanspp: fewer than " + std::to_string(k) +
                                " distinct points");
    }
    seeds.indices.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) nearest_d2[i] = std::min(nearest_d2[i], dist2(i, pick));
    nearest_d2[pick] = 0.0;
  }
  return seeds;
}

SeedSet init_dpp(const dpp::Sampler& sampler, Rng& rng) {
  for (std::size_t attempt = 0; attempt <= kMaxEmptyRedraws; ++attempt) {
    dpp::DppSample s = sampler.sample(rng);
    if (!s.empty()) return SeedSet{std::move(s.draw_order), SeedMethod::dpp, attempt};
  }
  throw DegenerateDataError("init_dpp: every DPP draw was empty after " +
                            std::to_string(kMaxEmptyRedraws) + " redraws");
}

SeedSet init_dpp(const kernels::GramMatrix& g, Rng& rng) { return init_dpp(dpp::Sampler(g), rng); }

SeedSet init_kdpp(const dpp::Sampler& sampler, std::size_t k, Rng& rng) {
  dpp::DppSample s = sampler.sample_k(k, rng);
  return SeedSet{std::move(s.draw_order), SeedMethod::dppk};
}

SeedSet init_kdpp(const kernels::GramMatrix& g, std::size_t k, Rng& rng) {
  return init_kdpp(dpp::Sampler(g), k, rng);
}

SeedSet init_sequential(const kernels::GramMatrix& g, std::size_t k, Rng& rng) {
  dpp::DppSample s = dpp::sequential_sample(g, k, rng);
  SeedSet seeds{std::move(s.draw_order), SeedMethod::sequential};
  seeds.uniform_fallbacks = s.uniform_fallbacks;
  return seeds;
}

double vector_cost(const Eigen::MatrixXd& points, std::span<const std::size_t> assignments,
                   std::size_t k) {
  const Eigen::MatrixXd means = cluster_means(points, assignments, k);
  double cost = 0.0;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    cost += (points.row(as_index(i)) - means.row(as_index(assignments[i]))).squaredNorm();
  }
  return cost;
}

double kernel_cost(const kernels::GramMatrix& g, std::span<const std::size_t> assignments,
                   std::size_t k) {
  // sum over clusters of sum_i K(i,i) - (1/|C|) sum_{j,l} K(j,l)
  double cost = 0.0;
  for (const auto& c : group(assignments, k)) {
    if (c.empty()) continue;
    double within = 0.0;
    for (std::size_t a : c) {
      cost += g(a, a);
      for (std::size_t b : c) within += g(a, b);
    }
    cost -= within / static_cast<double>(c.size());
  }
  return std::max(0.0, cost);
}

Clustering lloyd_vector(const Eigen::MatrixXd& points, const SeedSet& seeds, int max_iter) {
  const auto n = static_cast<std::size_t>(points.rows());
  validate_seeds(seeds, n);
  if (max_iter < 1) throw InvalidInput("lloyd_vector: max_iter must be positive");
  const std::size_t k = seeds.indices.size();

  Clustering out;
  out.mode = Mode::vector;
  out.centroids.resize(as_index(k), points.cols());
  for (std::size_t j = 0; j < k; ++j) out.centroids.row(as_index(j)) = points.row(as_index(seeds.indices[j]));

  std::vector<std::size_t> previous;
  Eigen::MatrixXd dist(as_index(n), as_index(k));
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        dist(as_index(i), as_index(j)) =
            (points.row(as_index(i)) - out.centroids.row(as_index(j))).squaredNorm();
      }
    }
    std::vector<std::size_t> assign = nearest(dist);
    repair_empty(assign, dist, k);
    out.centroids = cluster_means(points, assign, k);

    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cost += (points.row(as_index(i)) - out.centroids.row(as_index(assign[i]))).squaredNorm();
    }
    out.cost = cost;
    out.cost_history.push_back(cost);
    out.iterations = iter;
    const bool stable = assign == previous;
    previous = std::move(assign);
    if (stable) {
      out.converged = true;
      break;
    }
  }
  out.assignments = std::move(previous);
  out.members = group(out.assignments, k);
  return out;
}

Clustering lloyd_kernel(const kernels::GramMatrix& g, const SeedSet& seeds, int max_iter) {
  const std::size_t n = g.size();
  validate_seeds(seeds, n);
  if (max_iter < 1) throw InvalidInput("lloyd_kernel: max_iter must be positive");
  const std::size_t k = seeds.indices.size();
  const Eigen::MatrixXd& kmat = g.base.matrix();

  Clustering out;
  out.mode = Mode::kernel;
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t j = 0; j < k; ++j) members[j] = {seeds.indices[j]};

  std::vector<std::size_t> previous;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const Eigen::MatrixXd dist = kernel_distances(kmat, members);
    std::vector<std::size_t> assign = nearest(dist);
    repair_empty(assign, dist, k);
    members = group(assign, k);

    out.cost = kernel_cost(g, assign, k);
    out.cost_history.push_back(out.cost);
    out.iterations = iter;
    const bool stable = assign == previous;
    previous = std::move(assign);
    if (stable) {
      out.converged = true;
      break;
    }
  }
  out.assignments = std::move(previous);
  out.members = std::move(members);
  return out;
}

}  // namespace dppkm::clustering
