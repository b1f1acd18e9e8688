#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "dppkm/linalg.hpp"

namespace dppkm::kernels {

enum class KernelKind { rbf, word_ngram };

std::string to_string(KernelKind kind);

/// Unit-diagonal PSD similarity matrix over a dataset, with the parameters
/// that produced it.
struct GramMatrix {
  linalg::SymMatrix base;
  KernelKind kind;
  double sigma = 0.0;    // rbf only
  int max_ngram = 0;     // word_ngram only

  std::size_t size() const { return base.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return base(i, j); }
};

using TokenList = std::vector<std::string>;

/// K(i,j) = exp(-sigma * |x_i - x_j|^2); rows of points are the data points.
GramMatrix rbf_gram(const Eigen::MatrixXd& points, double sigma);

/// Median-heuristic bandwidth: 1 / (2 * median pairwise squared distance).
/// For an even number of pairs the median is the mean of the two middle
/// values. Throws DegenerateDataError when all points coincide.
double median_sigma(const Eigen::MatrixXd& points);

/// Cosine-normalized contiguous word n-gram kernel for n = 1..max_ngram.
/// The raw kernel sums count_s(g) * count_t(g) over every shared n-gram g.
GramMatrix word_ngram_gram(const std::vector<TokenList>& texts, int max_ngram = 2);

/// Squared distance between the feature images of points i and j.
double kernel_sq_distance(const GramMatrix& g, std::size_t i, std::size_t j);

/// Squared Euclidean distance between two rows.
inline double sq_distance(const Eigen::MatrixXd& points, std::size_t i, std::size_t j) {
  return (points.row(static_cast<Eigen::Index>(i)) -
          points.row(static_cast<Eigen::Index>(j)))
      .squaredNorm();
}

}  // namespace dppkm::kernels
