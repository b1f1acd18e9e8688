#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dppkm/clustering.hpp"
#include "dppkm/datasets.hpp"
#include "dppkm/dpp.hpp"
#include "dppkm/evalmetrics.hpp"

namespace dppkm::experiments {

inline constexpr const char* kVersion = "0.1.0";

/// Table-shaped experiment output. Serialized as TSV behind '#' provenance
/// lines; every value is pre-formatted so identical inputs give identical
/// bytes.
struct ResultTable {
  std::vector<std::string> provenance;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write_tsv(std::ostream& out) const;
  std::string to_tsv() const;
  std::size_t column(const std::string& name) const;
};

/// Fixed six-decimal rendering used for every real-valued cell.
std::string format_real(double v);

using clustering::SeedMethod;

struct RunOptions {
  int runs = 50;
  std::uint64_t master_seed = 0;
  int max_iter = clustering::kDefaultMaxIter;
  int jobs = 1;
};

// -- synthetic Gaussian grids ------------------------------------------------

struct SyntheticConfig {
  std::vector<int> grid_sides{2, 3, 4, 5, 6, 10};
  double separation = 10.0;
  double variance = 1.0;
  int points_per = 100;
  std::vector<SeedMethod> methods{SeedMethod::rand, SeedMethod::pp, SeedMethod::dpp,
                                  SeedMethod::dppk};
  std::optional<double> sigma;  // default: 1 / (2 * separation^2)
  RunOptions run;
};

/// Default RBF bandwidth for the grids: the kernel length scale equals the
/// spacing between neighbouring Gaussians.
double grid_sigma(double separation);

struct GridOutcome {
  int grid_side = 0;
  int k_true = 0;
  std::size_t n = 0;
  double sigma = 0.0;
  double expected_dpp_size = 0.0;
  std::map<SeedMethod, std::vector<int>> missed;  // per run
  std::map<SeedMethod, double> median_missed;
  std::vector<double> inferred_k;  // dpp only, per run
  std::optional<eval::RunSummary> inferred_k_summary;
};

struct SyntheticReport {
  std::vector<GridOutcome> grids;
  std::optional<double> k_correlation;  // Pearson(mean inferred k, k_true)
  ResultTable table;
};

SyntheticReport run_synthetic(const SyntheticConfig& cfg);

// -- benchmark datasets ------------------------------------------------------

struct BenchmarkConfig {
  std::optional<std::size_t> k;  // default: number of gold classes
  std::vector<SeedMethod> methods{SeedMethod::pp, SeedMethod::dpp, SeedMethod::dppk};
  std::optional<double> sigma;   // default: median heuristic
  bool standardize = false;
  eval::F1Matching matching = eval::F1Matching::best_match;
  RunOptions run;
};

struct MethodOutcome {
  SeedMethod method = SeedMethod::pp;
  std::vector<double> k;     // clusters used per run
  std::vector<double> f1;    // empty when F1 is not defined for the method
  std::vector<double> cost;
  std::optional<eval::RunSummary> k_summary;
  std::optional<eval::RunSummary> f1_summary;
  std::optional<eval::RunSummary> cost_summary;
  std::optional<eval::RunSummary> cost_per_point_summary;
};

struct BenchmarkReport {
  std::string dataset;
  std::size_t n = 0;
  std::size_t k_true = 0;
  double sigma = 0.0;
  std::vector<MethodOutcome> methods;
  ResultTable table;

  const MethodOutcome& method(SeedMethod m) const;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const datasets::LabeledDataset& data);

// -- screenplays -------------------------------------------------------------

struct ScreenplayInput {
  std::string name;
  std::vector<datasets::SceneBoundary> scenes;
  std::optional<std::vector<int>> gold;
};

struct ScreenplayConfig {
  int max_ngram = 2;
  std::vector<SeedMethod> methods{SeedMethod::rand, SeedMethod::pp, SeedMethod::dppk};
  eval::F1Matching matching = eval::F1Matching::best_match;
  RunOptions run;
};

struct ScreenplayOutcome {
  std::string name;
  std::size_t n = 0;
  std::optional<std::size_t> gold_k;
  double log_k = 0.0;
  double sqrt_k = 0.0;
  std::vector<double> inferred_k;
  eval::RunSummary inferred_k_summary;
  std::map<SeedMethod, eval::RunSummary> f1;  // only with gold labels
};

struct ScreenplayReport {
  std::vector<ScreenplayOutcome> screenplays;
  // Correlation of each k predictor with gold k, over screenplays with gold.
  std::map<std::string, double> correlation_with_gold;
  std::vector<std::string> notices;
  ResultTable table;
};

ScreenplayReport run_screenplay(const ScreenplayConfig& cfg, const std::vector<ScreenplayInput>& inputs);

// -- lemma verification ------------------------------------------------------

struct VerifyConfig {
  double half_separation = 2.0;
  double sigma = 1.0;
  std::size_t eps_grid = 1000;
};

struct VerifyReport {
  double bound = 0.0;
  std::vector<dpp::CounterexampleReport> grid;
  std::size_t witnesses = 0;         // eps with P(x3'|S) > P(x3''|S)
  std::size_t chain_violations = 0;  // eps where a stronger inequality holds but a weaker fails
  ResultTable table;
};

VerifyReport run_verify(const VerifyConfig& cfg);

// -- spectrum diagnostics ----------------------------------------------------

struct DiagReport {
  double sigma = 0.0;
  double expected_size = 0.0;
  std::size_t rank = 0;
  Eigen::VectorXd eigenvalues;
  ResultTable table;
};

DiagReport run_dpp_diag(const datasets::LabeledDataset& data, std::optional<double> sigma,
                        bool standardize = false);

}  // namespace dppkm::experiments
