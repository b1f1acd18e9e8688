#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace dppkm::linalg {

inline constexpr double kDefaultRidge = 1e-10;
inline constexpr double kSymmetryTolerance = 1e-12;

/// Dense real symmetric matrix. Construction rejects inputs whose entries
/// differ from their transpose by more than kSymmetryTolerance.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd entries);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

  /// Restriction to the rows/columns in idx, in the given order.
  SymMatrix principal(std::span<const std::size_t> idx) const;

  double trace() const { return m_.trace(); }

 private:
  Eigen::MatrixXd m_;
};

/// Eigenvalues sorted descending (ties keep the solver's original order) and
/// the matching orthonormal eigenvectors as columns.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  /// Count of eigenvalues strictly above threshold.
  std::size_t rank(double threshold = 1e-10) const;
};

EigenDecomposition sym_eig(const SymMatrix& m);

/// Sets negative eigenvalues (round-off on PSD inputs) to zero.
void clamp_nonnegative(EigenDecomposition& ed);

/// log det(m + ridge*I) through a Cholesky factorization.
/// Throws SingularMatrixError when the factorization fails.
double logdet_psd(const SymMatrix& m, double ridge = kDefaultRidge);

/// det(m[S+x]) / det(m[S]) evaluated as the Schur complement
/// m(x,x) - k^T (m[S] + ridge I)^{-1} k, clamped to [0, m(x,x)].
double det_ratio(const SymMatrix& m, std::span<const std::size_t> s,
                 std::size_t x, double ridge = kDefaultRidge);

/// det_ratio for every candidate, factoring m[S] once.
std::vector<double> det_ratios(const SymMatrix& m, std::span<const std::size_t> s,
                               std::span<const std::size_t> candidates,
                               double ridge = kDefaultRidge);

/// The subtracted Schur term k^T (m[S] + ridge I)^{-1} k for each candidate,
/// i.e. m(x,x) - det_ratio before clamping. Keeps full relative precision
/// when the ratio itself rounds to m(x,x).
std::vector<double> schur_projections(const SymMatrix& m, std::span<const std::size_t> s,
                                      std::span<const std::size_t> candidates,
                                      double ridge = kDefaultRidge);

/// det_ratios through the pseudo-inverse of m[S] instead of a ridge:
/// eigendirections of m[S] below rel_tol times the largest eigenvalue are
/// dropped. A candidate that duplicates a point of S gets ratio 0 up to
/// rounding, and repeated points inside S do not change the result.
std::vector<double> det_ratios_pinv(const SymMatrix& m, std::span<const std::size_t> s,
                                    std::span<const std::size_t> candidates,
                                    double rel_tol = 1e-12);

}  // namespace dppkm::linalg
