#include "dppkm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dppkm/errors.hpp"

namespace dppkm::kernels {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::rbf: return "rbf";
    case KernelKind::word_ngram: return "word_ngram";
  }
  return "unknown";
}

GramMatrix rbf_gram(const Eigen::MatrixXd& points, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidInput("rbf_gram: sigma must be a positive finite number");
  }
  const Eigen::Index n = points.rows();
  if (n < 1) throw InvalidInput("rbf_gram: no points");

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = std::exp(-sigma * (points.row(i) - points.row(j)).squaredNorm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix{linalg::SymMatrix(std::move(k)), KernelKind::rbf, sigma, 0};
}

double median_sigma(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw DegenerateDataError("median_sigma: need at least two points");
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d2.push_back((points.row(i) - points.row(j)).squaredNorm());
    }
  }
  const std::size_t mid = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid), d2.end());
  double median = d2[mid];
  if (d2.size() % 2 == 0) {
    const double lower = *std::max_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) {
    if (*std::max_element(d2.begin(), d2.end()) <= 0.0) {
      throw DegenerateDataError("median_sigma: all points are identical");
    }
    throw DegenerateDataError("median_sigma: median pairwise distance is zero");
  }
  return 1.0 / (2.0 * median);
}

namespace {

using NgramCounts = std::map<std::vector<std::string>, double>;

NgramCounts count_ngrams(const TokenList& tokens, int max_ngram) {
  NgramCounts counts;
  const auto len = tokens.size();
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_ngram) && n <= len; ++n) {
    for (std::size_t start = 0; start + n <= len; ++start) {
      counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(start + n))] += 1.0;
    }
  }
  return counts;
}

double dot(const NgramCounts& a, const NgramCounts& b) {
  const NgramCounts& small = a.size() <= b.size() ? a : b;
  const NgramCounts& large = a.size() <= b.size() ? b : a;
  double acc = 0.0;
  for (const auto& [gram, c] : small) {
    if (auto it = large.find(gram); it != large.end()) acc += c * it->second;
  }
  return acc;
}

}  // namespace

GramMatrix word_ngram_gram(const std::vector<TokenList>& texts, int max_ngram) {
  if (max_ngram < 1) throw InvalidInput("word_ngram_gram: n-gram length must be >= 1");
  if (texts.empty()) throw InvalidInput("word_ngram_gram: no texts");
  std::vector<NgramCounts> counts;
  counts.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      throw InvalidInput("word_ngram_gram: record " + std::to_string(i) + " has no tokens");
    }
    counts.push_back(count_ngrams(texts[i], max_ngram));
  }

  const auto n = static_cast<Eigen::Index>(texts.size());
  std::vector<double> self(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) self[i] = dot(counts[i], counts[i]);

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const double v = dot(counts[ui], counts[uj]) / std::sqrt(self[ui] * self[uj]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix{linalg::SymMatrix(std::move(k)), KernelKind::word_ngram, 0.0, max_ngram};
}

double kernel_sq_distance(const GramMatrix& g, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  return std::max(0.0, g(i, i) + g(j, j) - 2.0 * g(i, j));
}

}  // namespace dppkm::kernels
