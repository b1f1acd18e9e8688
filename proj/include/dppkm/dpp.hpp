#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dppkm/kernels.hpp"
#include "dppkm/linalg.hpp"
#include "dppkm/random.hpp"

// Determinantal point processes over a Gram matrix used as an L-ensemble:
// P(Y = A) = det(L_A) / det(L + I).
namespace dppkm::dpp {

enum class SampleSource { spectral, kdpp, sequential };

std::string to_string(SampleSource source);

struct DppSample {
  std::vector<std::size_t> indices;     // strictly increasing
  std::vector<std::size_t> draw_order;  // the same indices in selection order
  SampleSource source = SampleSource::spectral;
  // sequential only: rounds where every remaining ratio fell below the floor
  std::size_t uniform_fallbacks = 0;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

inline constexpr std::size_t kMaxBruteForceSize = 12;
inline constexpr double kRankThreshold = 1e-10;
inline constexpr double kSequentialFloor = 1e-14;

/// Exact subset probabilities of a small L-ensemble, indexed by bitmask
/// (bit i set <=> element i in the subset).
struct SubsetPmf {
  std::size_t ground_size = 0;
  std::vector<double> probability;

  double operator[](std::uint32_t mask) const { return probability[mask]; }
  static std::vector<std::size_t> members(std::uint32_t mask);
  static std::uint32_t mask_of(std::span<const std::size_t> indices);
};

SubsetPmf brute_force_pmf(const linalg::SymMatrix& l);
inline SubsetPmf brute_force_pmf(const kernels::GramMatrix& g) {
  return brute_force_pmf(g.base);
}

/// Sum of lambda / (1 + lambda): the mean cardinality of the L-ensemble.
double expected_size(std::span<const double> eigenvalues);
double expected_size(const Eigen::VectorXd& eigenvalues);

/// Table e(n, k) of elementary symmetric polynomials of the first n
/// eigenvalues, n = 0..N and k = 0..kmax.
Eigen::MatrixXd elementary_symmetric(std::span<const double> eigenvalues, std::size_t kmax);

/// Spectral sampler over a fixed kernel. The eigendecomposition is computed
/// once at construction (negative eigenvalues clamped to zero); sampling is
/// const and may run concurrently given one generator per thread.
class Sampler {
 public:
  explicit Sampler(const linalg::SymMatrix& l);
  explicit Sampler(const kernels::GramMatrix& g) : Sampler(g.base) {}

  /// Full DPP draw: keeps eigenvector n with probability lambda/(lambda+1),
  /// then projects. May return the empty set.
  DppSample sample(Rng& rng) const;

  /// k-DPP draw of exactly k points. Throws RankError if k exceeds the
  /// number of eigenvalues above kRankThreshold.
  DppSample sample_k(std::size_t k, Rng& rng) const;

  const linalg::EigenDecomposition& spectrum() const { return eig_; }
  std::size_t ground_size() const { return eig_.size(); }
  std::size_t rank() const { return eig_.rank(kRankThreshold); }
  double expected_size() const { return dpp::expected_size(eig_.values); }

 private:
  std::vector<std::size_t> project(std::span<const Eigen::Index> columns, Rng& rng) const;

  linalg::EigenDecomposition eig_;
};

DppSample dpp_sample(const kernels::GramMatrix& g, Rng& rng);
DppSample kdpp_sample(const kernels::GramMatrix& g, std::size_t k, Rng& rng);

/// Draw weights of one sequential round: det_ratios_pinv(g, selected, x) for every
/// unselected x, 0 for selected points.
std::vector<double> sequential_weights(const linalg::SymMatrix& l,
                                       std::span<const std::size_t> selected);

/// Sequential conditional sampler: a uniform first point, then k-1 rounds
/// drawing x with probability proportional to det(L[S+x]) / det(L[S]) over
/// the unselected points. When every ratio is below kSequentialFloor the
/// round falls back to a uniform draw and the sample records it.
DppSample sequential_sample(const kernels::GramMatrix& g, std::size_t k, Rng& rng);
DppSample sequential_sample(const linalg::SymMatrix& l, std::size_t k, Rng& rng);

// ---------------------------------------------------------------------------
// Three-point counterexample on a line: x1 = -D, x2 = +D already selected,
// compare the candidate beyond x2 (2D - eps) against the midpoint (0).

struct CounterexampleConfig {
  double half_separation = 2.0;  // D
  double sigma = 1.0;
  double epsilon = 0.5;
};

/// sqrt(ln 6 / (4 sigma)); D must exceed it.
double min_half_separation(double sigma);

struct CounterexampleReport {
  double epsilon = 0.0;
  double p_beyond = 0.0;    // P(x3' | S), x3' = 2D - eps
  double p_midpoint = 0.0;  // P(x3'' | S), x3'' = 0
  bool beyond_preferred = false;  // P(x3'|S) > P(x3''|S)
  // Sufficient conditions, each implying the previous one.
  bool eq2 = false;
  bool eq3 = false;
  bool eq4 = false;
  bool eq5 = false;

  /// Whenever a stronger condition holds, every weaker one (and the
  /// preference itself) must hold too.
  bool chain_consistent() const;
};

CounterexampleReport verify_counterexample(const CounterexampleConfig& cfg);

/// verify_counterexample at eps = D * i / (grid + 1), i = 1..grid.
std::vector<CounterexampleReport> scan_counterexample(double half_separation, double sigma,
                                                      std::size_t grid = 1000);

}  // namespace dppkm::dpp
