#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dppkm/kernels.hpp"
#include "dppkm/random.hpp"

namespace dppkm::datasets {

/// Vector or text records with optional gold labels. Synthetic data also
/// carries the generating centers.
struct LabeledDataset {
  std::string name;
  Eigen::MatrixXd points;                  // one row per record (vector data)
  std::vector<kernels::TokenList> texts;   // one entry per record (text data)
  std::optional<std::vector<int>> gold_labels;
  std::optional<Eigen::MatrixXd> true_centers;
  std::size_t dropped_rows = 0;  // rows skipped for missing values

  bool is_text() const { return !texts.empty(); }
  std::size_t size() const {
    return is_text() ? texts.size() : static_cast<std::size_t>(points.rows());
  }
  /// Number of distinct gold labels; throws if the dataset has none.
  std::size_t gold_class_count() const;
  const std::vector<int>& require_gold() const;
};

struct GridParams {
  int grid_side = 5;
  double separation = 10.0;
  double variance = 1.0;
  int points_per = 100;
};

/// grid_side^2 isotropic 2-D Gaussians centred at (i*sep, j*sep). The label
/// of a point is the row-major index i*grid_side + j of its Gaussian.
LabeledDataset synth_gaussian_grid(const GridParams& params, Rng& rng);

/// TSV with columns x, y, gold_label behind a '#' header line carrying the
/// generator parameters and seed.
void write_synthetic_tsv(std::ostream& out, const LabeledDataset& data, const GridParams& params,
                         std::uint64_t seed);

struct DelimitedOptions {
  std::optional<std::size_t> label_column;
  char delimiter = ',';
};

/// Numeric feature rows with an optional categorical label column (mapped
/// to dense ids by first appearance). Rows containing '?' are dropped and
/// counted. Throws ParseError with the row number on bad input.
LabeledDataset load_delimited(const std::string& path, const DelimitedOptions& options);
LabeledDataset parse_delimited(std::istream& in, const DelimitedOptions& options,
                               std::string name = "stdin");

/// Column-wise zero mean and unit sample variance; constant columns are
/// only centred.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& points);

// ---------------------------------------------------------------------------
// Screenplays

const std::set<std::string>& default_time_tags();

struct SceneBoundary {
  std::size_t scene_index = 0;  // order of appearance among accepted headings
  std::size_t line_number = 0;  // 1-based line in the source text
  std::string raw_heading;
  kernels::TokenList location_tokens;
  std::optional<int> gold_cluster;
};

/// True when the trimmed line, minus an optional leading scene number,
/// starts with INT./EXT., I/E, INT., EXT., INT or EXT (any case).
bool is_scene_heading(std::string_view line);

/// Uppercases, strips the scene number and INT/EXT marker, strips trailing
/// time-of-day tags with their dash, then splits on whitespace, '/' and '-'.
/// Throws DegenerateDataError if nothing remains.
kernels::TokenList normalize_heading(std::string_view raw,
                                     const std::set<std::string>& time_tags = default_time_tags());

/// Scene boundaries in document order. Headings that normalize to nothing
/// are skipped; a line describing each goes to diagnostics when given.
std::vector<SceneBoundary> parse_screenplay(std::string_view text,
                                            const std::set<std::string>& time_tags = default_time_tags(),
                                            std::vector<std::string>* diagnostics = nullptr);

/// Reads "scene_index<TAB>cluster_id" lines into a label per scene.
/// Unknown or missing scene indices are errors.
std::vector<int> parse_gold_sidecar(std::istream& in, std::size_t scene_count);
std::vector<int> load_gold_sidecar(const std::string& path, std::size_t scene_count);

/// Text dataset of the location tokens, with gold labels when provided.
LabeledDataset screenplay_dataset(const std::vector<SceneBoundary>& scenes, std::string name,
                                  std::optional<std::vector<int>> gold = std::nullopt);

std::string read_file(const std::string& path);

}  // namespace dppkm::datasets
