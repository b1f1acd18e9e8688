#include "dppkm/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dppkm/errors.hpp"

namespace dppkm::linalg {

namespace {

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_indices(const SymMatrix& m, std::span<const std::size_t> s,
                   std::span<const std::size_t> candidates) {
  const std::size_t n = m.dim();
  for (std::size_t i : s) {
    if (i >= n) throw InvalidInput("det_ratio: index out of range");
  }
  for (std::size_t x : candidates) {
    if (x >= n) throw InvalidInput("det_ratio: index out of range");
    if (std::find(s.begin(), s.end(), x) != s.end()) {
      throw InvalidInput("det_ratio: candidate " + std::to_string(x) + " already in the set");
    }
  }
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw InvalidInput("SymMatrix: expected a non-empty square matrix, got " +
                       std::to_string(m_.rows()) + "x" +
                       std::to_string(m_.cols()));
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      if (!(std::abs(m_(i, j) - m_(j, i)) <= kSymmetryTolerance)) {
        throw InvalidInput("SymMatrix: entries (" + std::to_string(i) + "," +
                           std::to_string(j) + ") and transpose differ");
      }
    }
  }
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(as_index(dim), as_index(dim)));
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(as_index(diag.size()),
                                            as_index(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) m(as_index(i), as_index(i)) = diag[i];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::principal(std::span<const std::size_t> idx) const {
  const auto k = as_index(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = m_(as_index(idx[a]), as_index(idx[b]));
    }
  }
  return SymMatrix(std::move(sub));
}

std::size_t EigenDecomposition::rank(double threshold) const {
  return static_cast<std::size_t>((values.array() > threshold).count());
}

EigenDecomposition sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(),
                                                        Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw SingularMatrixError("sym_eig: eigensolver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values(a) > values(b);
  });

  EigenDecomposition ed;
  ed.values.resize(values.size());
  ed.vectors.resize(vectors.rows(), vectors.cols());
  for (std::size_t out = 0; out < order.size(); ++out) {
    ed.values(as_index(out)) = values(order[out]);
    ed.vectors.col(as_index(out)) = vectors.col(order[out]);
  }
  return ed;
}

void clamp_nonnegative(EigenDecomposition& ed) {
  ed.values = ed.values.cwiseMax(0.0);
}

double logdet_psd(const SymMatrix& m, double ridge) {
  Eigen::MatrixXd a = m.matrix();
  a.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("logdet_psd: Cholesky factorization failed (ridge " +
                              std::to_string(ridge) + ")");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

std::vector<double> schur_projections(const SymMatrix& m, std::span<const std::size_t> s,
                                      std::span<const std::size_t> candidates,
                                      double ridge) {
  check_indices(m, s, candidates);
  std::vector<double> out(candidates.size(), 0.0);
  if (s.empty()) return out;

  const auto k = as_index(s.size());
  Eigen::MatrixXd ks(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) ks(a, b) = m(s[a], s[b]);
  }
  ks.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(ks);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("det_ratio: conditioning set is singular after ridging");
  }
  // k^T A^{-1} k = |L^{-1} k|^2, all candidates in one triangular solve
  Eigen::MatrixXd kx(k, as_index(candidates.size()));
  for (Eigen::Index c = 0; c < kx.cols(); ++c) {
    for (Eigen::Index a = 0; a < k; ++a) kx(a, c) = m(s[a], candidates[c]);
  }
  llt.matrixL().solveInPlace(kx);
  for (Eigen::Index c = 0; c < kx.cols(); ++c) out[c] = kx.col(c).squaredNorm();
  return out;
}

std::vector<double> det_ratios(const SymMatrix& m, std::span<const std::size_t> s,
                               std::span<const std::size_t> candidates, double ridge) {
  std::vector<double> out = schur_projections(m, s, candidates, ridge);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double kxx = m(candidates[c], candidates[c]);
    out[c] = std::clamp(kxx - out[c], 0.0, std::max(kxx, 0.0));
  }
  return out;
}

double det_ratio(const SymMatrix& m, std::span<const std::size_t> s, std::size_t x,
                 double ridge) {
  const std::size_t candidate[] = {x};
  return det_ratios(m, s, candidate, ridge).front();
}

std::vector<double> det_ratios_pinv(const SymMatrix& m, std::span<const std::size_t> s,
                                    std::span<const std::size_t> candidates, double rel_tol) {
  check_indices(m, s, candidates);
  std::vector<double> out(candidates.size(), 0.0);
  for (std::size_t c = 0; c < candidates.size(); ++c) out[c] = std::max(m(candidates[c], candidates[c]), 0.0);
  if (s.empty()) return out;

  const auto k = as_index(s.size());
  Eigen::MatrixXd ks(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) ks(a, b) = m(s[a], s[b]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ks);
  if (eig.info() != Eigen::Success) throw SingularMatrixError("det_ratio: eigensolver did not converge");
  const double cutoff = rel_tol * std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 0.0);

  Eigen::MatrixXd kx(k, as_index(candidates.size()));
  for (Eigen::Index c = 0; c < kx.cols(); ++c) {
    for (Eigen::Index a = 0; a < k; ++a) kx(a, c) = m(s[a], candidates[c]);
  }
  const Eigen::MatrixXd coords = eig.eigenvectors().transpose() * kx;
  for (Eigen::Index c = 0; c < kx.cols(); ++c) {
    double proj = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) {
      const double lambda = eig.eigenvalues()(a);
      if (lambda > cutoff) proj += coords(a, c) * coords(a, c) / lambda;
    }
    out[c] = std::clamp(out[c] - proj, 0.0, out[c]);
  }
  return out;
}

}  // namespace dppkm::linalg
