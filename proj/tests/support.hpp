#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "dppkm/linalg.hpp"
#include "dppkm/random.hpp"

namespace dppkm::testing {

// Random PSD matrix of the given rank (rank <= dim), built as B B^T.
inline linalg::SymMatrix random_psd(std::size_t dim, std::size_t rank, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd b(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = normal(rng);
  }
  Eigen::MatrixXd m = b * b.transpose();
  m = 0.5 * (m + m.transpose()).eval();
  return linalg::SymMatrix(m);
}

// Points drawn uniformly from [lo, hi)^dim, one per row.
inline Eigen::MatrixXd random_points(std::size_t n, std::size_t dim, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = u(rng);
  }
  return p;
}

inline Eigen::MatrixXd column(std::initializer_list<double> xs) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return p;
}

}  // namespace dppkm::testing
