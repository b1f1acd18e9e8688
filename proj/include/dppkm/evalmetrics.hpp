#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dppkm::eval {

enum class F1Matching {
  best_match,  // each gold class takes its best cluster; clusters may be reused
  hungarian,   // one-to-one assignment maximizing the summed F1
};

/// Unweighted mean over gold classes of the F1 score of the matched cluster.
/// Labels are arbitrary non-negative integers.
double f1_macro(std::span<const std::size_t> predicted, std::span<const int> gold,
                F1Matching matching = F1Matching::best_match);

/// Count of true centers that are the nearest true center of no centroid.
int missed_clusters(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& true_centers);

/// Sample Pearson correlation. Throws DegenerateDataError on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

enum class HeuristicK { log10, sqrt };

double heuristic_k(std::size_t n, HeuristicK kind);

struct RunSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
  std::size_t n_runs = 0;
  std::string metric_name;
};

RunSummary summarize(std::span<const double> values, std::string name);

/// Median; the mean of the two middle values for even sizes.
double median(std::vector<double> values);

}  // namespace dppkm::eval
