#include "dppkm/dpp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dppkm/errors.hpp"

namespace dppkm::dpp {

namespace {

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

DppSample make_sample(std::vector<std::size_t> order, SampleSource source) {
  DppSample s;
  s.draw_order = std::move(order);
  s.indices = s.draw_order;
  std::sort(s.indices.begin(), s.indices.end());
  s.source = source;
  return s;
}

}  // namespace

std::string to_string(SampleSource source) {
  switch (source) {
    case SampleSource::spectral: return "spectral";
    case SampleSource::kdpp: return "kdpp";
    case SampleSource::sequential: return "sequential";
  }
  return "unknown";
}

std::vector<std::size_t> SubsetPmf::members(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) out.push_back(i);
  }
  return out;
}

std::uint32_t SubsetPmf::mask_of(std::span<const std::size_t> indices) {
  std::uint32_t mask = 0;
  for (std::size_t i : indices) mask |= (1u << i);
  return mask;
}

SubsetPmf brute_force_pmf(const linalg::SymMatrix& l) {
  const std::size_t n = l.dim();
  if (n > kMaxBruteForceSize) {
    throw SizeLimitError("brute_force_pmf: ground set of size " + std::to_string(n) +
                         " exceeds the enumeration limit " +
                         std::to_string(kMaxBruteForceSize));
  }
  const Eigen::MatrixXd& m = l.matrix();
  const double normalizer =
      (m + Eigen::MatrixXd::Identity(m.rows(), m.cols())).determinant();

  SubsetPmf pmf;
  pmf.ground_size = n;
  pmf.probability.assign(std::size_t{1} << n, 0.0);
  pmf.probability[0] = 1.0 / normalizer;  // det(L_empty) = 1
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto idx = SubsetPmf::members(mask);
    pmf.probability[mask] = l.principal(idx).matrix().determinant() / normalizer;
  }
  return pmf;
}

double expected_size(std::span<const double> eigenvalues) {
  double acc = 0.0;
  for (double lambda : eigenvalues) acc += lambda / (1.0 + lambda);
  return acc;
}

double expected_size(const Eigen::VectorXd& eigenvalues) {
  return expected_size(std::span<const double>(eigenvalues.data(),
                                               static_cast<std::size_t>(eigenvalues.size())));
}

Eigen::MatrixXd elementary_symmetric(std::span<const double> eigenvalues, std::size_t kmax) {
  const std::size_t n = eigenvalues.size();
  if (kmax > n) {
    throw InvalidInput("elementary_symmetric: kmax " + std::to_string(kmax) +
                       " exceeds the number of eigenvalues " + std::to_string(n));
  }
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(as_index(n + 1), as_index(kmax + 1));
  e.col(0).setOnes();
  for (std::size_t row = 1; row <= n; ++row) {
    const double lambda = eigenvalues[row - 1];
    const auto r = as_index(row);
    for (std::size_t k = 1; k <= kmax; ++k) {
      const auto c = as_index(k);
      e(r, c) = e(r - 1, c) + lambda * e(r - 1, c - 1);
    }
  }
  return e;
}

Sampler::Sampler(const linalg::SymMatrix& l) : eig_(linalg::sym_eig(l)) {
  linalg::clamp_nonnegative(eig_);
}

std::vector<std::size_t> Sampler::project(std::span<const Eigen::Index> columns,
                                          Rng& rng) const {
  const Eigen::Index n = eig_.vectors.rows();
  Eigen::MatrixXd v(n, as_index(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) v.col(as_index(c)) = eig_.vectors.col(columns[c]);

  std::vector<std::size_t> order;
  order.reserve(columns.size());
  std::vector<double> weights(static_cast<std::size_t>(n));
  while (v.cols() > 0) {
    for (Eigen::Index i = 0; i < n; ++i) weights[static_cast<std::size_t>(i)] = v.row(i).squaredNorm();
    for (std::size_t chosen : order) weights[chosen] = 0.0;
    std::size_t pick = draw_weighted(weights, rng);
    if (pick == weights.size()) break;  // numerically exhausted subspace
    order.push_back(pick);
    const auto row = as_index(pick);

    // eliminate the coordinate e_pick from the span using the column with
    // the largest entry in that row, then drop that column
    Eigen::Index pivot = 0;
    v.row(row).cwiseAbs().maxCoeff(&pivot);
    const Eigen::VectorXd pivot_col = v.col(pivot);
    const double pivot_val = pivot_col(row);
    const Eigen::Index last = v.cols() - 1;
    for (Eigen::Index c = 0; c <= last; ++c) {
      if (c == pivot) continue;
      v.col(c) -= pivot_col * (v(row, c) / pivot_val);
    }
    if (pivot != last) v.col(pivot) = v.col(last);
    v.conservativeResize(Eigen::NoChange, last);

    // modified Gram-Schmidt
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      for (Eigen::Index p = 0; p < c; ++p) v.col(c) -= v.col(p).dot(v.col(c)) * v.col(p);
      const double norm = v.col(c).norm();
      if (norm > 0.0) v.col(c) /= norm;
    }
  }
  return order;
}

DppSample Sampler::sample(Rng& rng) const {
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < eig_.values.size(); ++j) {
    const double lambda = eig_.values(j);
    if (uniform01(rng) < lambda / (lambda + 1.0)) kept.push_back(j);
  }
  return make_sample(project(kept, rng), SampleSource::spectral);
}

DppSample Sampler::sample_k(std::size_t k, Rng& rng) const {
  if (k == 0) throw InvalidInput("kdpp: k must be at least 1");
  const std::size_t r = rank();
  if (k > r) {
    throw RankError("kdpp: k = " + std::to_string(k) + " exceeds the numerical rank " +
                    std::to_string(r));
  }
  // Selection probabilities are invariant to a common rescaling of the
  // spectrum; dividing by the largest eigenvalue keeps e(n, k) in range.
  const double scale = eig_.values(0);
  std::vector<double> lambda(eig_.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = eig_.values(as_index(i)) / scale;
  const Eigen::MatrixXd e = elementary_symmetric(lambda, k);
  if (!(e(as_index(lambda.size()), as_index(k)) > 0.0) ||
      !std::isfinite(e(as_index(lambda.size()), as_index(k)))) {
    throw RankError("kdpp: elementary symmetric normalizer is not positive");
  }

  std::vector<Eigen::Index> kept;
  std::size_t remaining = k;
  for (std::size_t n = lambda.size(); n >= 1 && remaining > 0; --n) {
    const auto rn = as_index(n);
    const auto rk = as_index(remaining);
    const double denom = e(rn, rk);
    const double p = denom > 0.0 ? lambda[n - 1] * e(rn - 1, rk - 1) / denom : 1.0;
    if (n == remaining || uniform01(rng) < p) {
      kept.push_back(rn - 1);
      --remaining;
    }
  }
  auto order = project(kept, rng);
  if (order.size() != k) {
    throw RankError("kdpp: projection lost rank (got " + std::to_string(order.size()) +
                    " of " + std::to_string(k) + " points)");
  }
  return make_sample(std::move(order), SampleSource::kdpp);
}

DppSample dpp_sample(const kernels::GramMatrix& g, Rng& rng) { return Sampler(g).sample(rng); }

DppSample kdpp_sample(const kernels::GramMatrix& g, std::size_t k, Rng& rng) {
  return Sampler(g).sample_k(k, rng);
}

std::vector<double> sequential_weights(const linalg::SymMatrix& l,
                                       std::span<const std::size_t> selected) {
  const std::size_t n = l.dim();
  std::vector<bool> taken(n, false);
  for (std::size_t i : selected) taken.at(i) = true;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) candidates.push_back(i);
  }
  const std::vector<double> ratios = linalg::det_ratios_pinv(l, selected, candidates);
  std::vector<double> weights(n, 0.0);
  for (std::size_t c = 0; c < candidates.size(); ++c) weights[candidates[c]] = ratios[c];
  return weights;
}

DppSample sequential_sample(const linalg::SymMatrix& l, std::size_t k, Rng& rng) {
  const std::size_t n = l.dim();
  if (k == 0 || k > n) {
    throw InvalidInput("sequential_sample: need 1 <= k <= n, got k = " + std::to_string(k));
  }
  std::vector<std::size_t> order{uniform_index(n, rng)};
  std::size_t fallbacks = 0;
  while (order.size() < k) {
    std::vector<double> weights = sequential_weights(l, order);
    const bool all_tiny = std::all_of(weights.begin(), weights.end(),
                                      [](double w) { return w < kSequentialFloor; });
    if (all_tiny) {
      ++fallbacks;
      for (double& w : weights) w = 1.0;
      for (std::size_t chosen : order) weights[chosen] = 0.0;
    }
    order.push_back(draw_weighted(weights, rng));
  }
  DppSample s = make_sample(std::move(order), SampleSource::sequential);
  s.uniform_fallbacks = fallbacks;
  return s;
}

DppSample sequential_sample(const kernels::GramMatrix& g, std::size_t k, Rng& rng) {
  return sequential_sample(g.base, k, rng);
}

// ---------------------------------------------------------------------------

double min_half_separation(double sigma) { return std::sqrt(std::log(6.0) / (4.0 * sigma)); }

bool CounterexampleReport::chain_consistent() const {
  if (eq5 && !eq4) return false;
  if (eq4 && !eq3) return false;
  if (eq3 && !eq2) return false;
  if (eq2 && !beyond_preferred) return false;
  return true;
}

CounterexampleReport verify_counterexample(const CounterexampleConfig& cfg) {
  const double d = cfg.half_separation;
  const double sigma = cfg.sigma;
  const double eps = cfg.epsilon;
  if (!(sigma > 0.0) || !(d > 0.0)) {
    throw InvalidInput("verify_counterexample: D and sigma must be positive");
  }
  const double bound = min_half_separation(sigma);
  if (!(d > bound)) {
    std::ostringstream msg;
    msg << "verify_counterexample: D = " << d << " violates D > sqrt(ln 6 / (4 sigma)) = "
        << bound << " for sigma = " << sigma;
    throw PreconditionError(msg.str());
  }
  if (!(eps > 0.0 && eps < d)) {
    throw InvalidInput("verify_counterexample: epsilon must lie in (0, D)");
  }

  Eigen::MatrixXd points(4, 1);
  points << -d, d, 2.0 * d - eps, 0.0;
  const kernels::GramMatrix g = kernels::rbf_gram(points, sigma);
  const std::size_t selected[] = {0, 1};
  const std::size_t candidates[] = {2, 3};

  CounterexampleReport r;
  r.epsilon = eps;
  const auto ratios = linalg::det_ratios(g.base, selected, candidates);
  r.p_beyond = ratios[0];
  r.p_midpoint = ratios[1];
  // Both ratios are 1 minus a term that may be far below double resolution
  // of 1; compare the subtracted terms directly.
  const auto proj = linalg::schur_projections(g.base, selected, candidates);
  r.beyond_preferred = proj[0] < proj[1];

  // Each inequality divided through by exp(-2 sigma D^2).
  const double s2 = sigma * d * d;
  const double near_gain = std::exp(2.0 * s2 - 2.0 * sigma * (d - eps) * (d - eps));
  const double far_term = std::exp(2.0 * s2 - 2.0 * sigma * (3.0 * d - eps) * (3.0 * d - eps));
  const double e4 = std::exp(-4.0 * s2);
  const double e6 = std::exp(-6.0 * s2);
  r.eq2 = far_term + near_gain <= 2.0 - 2.0 * e4;
  r.eq3 = 2.0 * e4 + e6 + near_gain < 2.0;
  r.eq4 = 3.0 * e4 + near_gain <= 2.0;
  r.eq5 = 0.5 + near_gain < 2.0;
  return r;
}

std::vector<CounterexampleReport> scan_counterexample(double half_separation, double sigma,
                                                      std::size_t grid) {
  if (grid == 0) throw InvalidInput("scan_counterexample: empty epsilon grid");
  std::vector<CounterexampleReport> out;
  out.reserve(grid);
  for (std::size_t i = 1; i <= grid; ++i) {
    const double eps = half_separation * static_cast<double>(i) / static_cast<double>(grid + 1);
    out.push_back(verify_counterexample({half_separation, sigma, eps}));
  }
  return out;
}

}  // namespace dppkm::dpp
