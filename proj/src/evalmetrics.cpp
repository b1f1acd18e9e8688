#include "dppkm/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dppkm/errors.hpp"

namespace dppkm::eval {

namespace {

// Maximum-weight assignment of rows to distinct columns (rows <= cols),
// O(rows^2 * cols) shortest augmenting path on the negated weights.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& w) {
  const int rows = static_cast<int>(w.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(w[0].size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> match(cols + 1, 0), way(cols + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= cols; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

double f1_macro(std::span<const std::size_t> predicted, std::span<const int> gold,
                F1Matching matching) {
  if (predicted.empty() || gold.empty()) throw InvalidInput("f1_macro: empty labeling");
  if (predicted.size() != gold.size()) {
    throw InvalidInput("f1_macro: " + std::to_string(predicted.size()) +
                       " predictions for " + std::to_string(gold.size()) + " gold labels");
  }
  // dense ids in order of first appearance
  std::map<std::size_t, std::size_t> cluster_id;
  std::map<int, std::size_t> class_id;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    cluster_id.try_emplace(predicted[i], cluster_id.size());
    class_id.try_emplace(gold[i], class_id.size());
  }
  const std::size_t nc = cluster_id.size();
  const std::size_t ng = class_id.size();
  std::vector<std::vector<double>> overlap(ng, std::vector<double>(nc, 0.0));
  std::vector<double> cluster_size(nc, 0.0), class_size(ng, 0.0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const std::size_t c = cluster_id[predicted[i]];
    const std::size_t g = class_id[gold[i]];
    overlap[g][c] += 1.0;
    cluster_size[c] += 1.0;
    class_size[g] += 1.0;
  }
  std::vector<std::vector<double>> f1(ng, std::vector<double>(nc, 0.0));
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t c = 0; c < nc; ++c) {
      if (overlap[g][c] == 0.0) continue;
      const double precision = overlap[g][c] / cluster_size[c];
      const double recall = overlap[g][c] / class_size[g];
      f1[g][c] = 2.0 * precision * recall / (precision + recall);
    }
  }

  double total = 0.0;
  if (matching == F1Matching::best_match) {
    for (const auto& row : f1) total += *std::max_element(row.begin(), row.end());
  } else if (ng <= nc) {
    const auto assign = max_weight_assignment(f1);
    for (std::size_t g = 0; g < ng; ++g) total += f1[g][static_cast<std::size_t>(assign[g])];
  } else {
    // more classes than clusters: unmatched classes score 0
    std::vector<std::vector<double>> transposed(nc, std::vector<double>(ng));
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t c = 0; c < nc; ++c) transposed[c][g] = f1[g][c];
    }
    const auto assign = max_weight_assignment(transposed);
    for (std::size_t c = 0; c < nc; ++c) total += f1[static_cast<std::size_t>(assign[c])][c];
  }
  return total / static_cast<double>(ng);
}

int missed_clusters(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& true_centers) {
  if (centroids.rows() == 0 || true_centers.rows() == 0) {
    throw InvalidInput("missed_clusters: empty centroid or center set");
  }
  if (centroids.cols() != true_centers.cols()) {
    throw InvalidInput("missed_clusters: centroid dimension " + std::to_string(centroids.cols()) +
                       " differs from center dimension " + std::to_string(true_centers.cols()));
  }
  std::vector<bool> hit(static_cast<std::size_t>(true_centers.rows()), false);
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    Eigen::Index best = 0;
    (true_centers.rowwise() - centroids.row(c)).rowwise().squaredNorm().minCoeff(&best);
    hit[static_cast<std::size_t>(best)] = true;
  }
  return static_cast<int>(std::count(hit.begin(), hit.end(), false));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInput("pearson: length mismatch");
  if (xs.size() < 2) throw InvalidInput("pearson: need at least two pairs");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateDataError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double heuristic_k(std::size_t n, HeuristicK kind) {
  if (n == 0) throw InvalidInput("heuristic_k: n must be at least 1");
  const auto x = static_cast<double>(n);
  return kind == HeuristicK::log10 ? std::log10(x) : std::sqrt(x);
}

RunSummary summarize(std::span<const double> values, std::string name) {
  if (values.empty()) throw InvalidInput("summarize: no values for " + name);
  RunSummary s;
  s.metric_name = std::move(name);
  s.n_runs = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median: no values");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

}  // namespace dppkm::eval
