#include "dppkm/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "dppkm/errors.hpp"

namespace dppkm::datasets {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// "12", "12A", "12." or "A12" style shooting-script scene numbers.
bool is_scene_number(std::string_view tok) {
  if (tok.empty()) return false;
  while (!tok.empty() && tok.back() == '.') tok.remove_suffix(1);
  if (tok.empty() || tok.size() > 6) return false;
  const auto digits = std::count_if(tok.begin(), tok.end(), is_digit);
  const auto alpha = std::count_if(tok.begin(), tok.end(),
                                   [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; });
  return digits >= 1 && alpha <= 1 && digits + alpha == static_cast<long>(tok.size());
}

// Drops a leading scene-number token. Returns true when one was removed.
bool strip_scene_number(std::string_view& s) {
  std::size_t end = 0;
  while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
  if (end == s.size() || !is_scene_number(s.substr(0, end))) return false;
  s = trim(s.substr(end));
  return true;
}

// Longest forms first so "INT./EXT." wins over "INT.".
constexpr std::string_view kMarkers[] = {"INT./EXT.", "EXT./INT.", "INT/EXT", "EXT/INT",
                                         "I/E",       "INT.",      "EXT.",    "INT",
                                         "EXT"};

std::size_t marker_length(std::string_view s) {
  for (std::string_view m : kMarkers) {
    if (s.size() < m.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < m.size() && same; ++i) {
      same = std::toupper(static_cast<unsigned char>(s[i])) == m[i];
    }
    if (!same) continue;
    if (is_alnum(m.back()) && s.size() > m.size() && is_alnum(s[m.size()])) continue;
    return m.size();
  }
  return 0;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::size_t LabeledDataset::gold_class_count() const {
  const auto& gold = require_gold();
  std::vector<int> sorted(gold);
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

const std::vector<int>& LabeledDataset::require_gold() const {
  if (!gold_labels) {
    throw InvalidInput("dataset '" + name + "' has no gold labels; supply a label column or gold file");
  }
  return *gold_labels;
}

LabeledDataset synth_gaussian_grid(const GridParams& params, Rng& rng) {
  if (params.grid_side < 1 || !(params.separation > 0.0) || !(params.variance > 0.0) ||
      params.points_per < 1) {
    throw InvalidInput("synth_gaussian_grid: grid side, separation, variance and points per "
                       "Gaussian must all be positive");
  }
  const int side = params.grid_side;
  const int clusters = side * side;
  LabeledDataset data;
  data.name = "grid" + std::to_string(side) + "x" + std::to_string(side);
  data.points.resize(static_cast<Eigen::Index>(clusters) * params.points_per, 2);
  data.true_centers = Eigen::MatrixXd(clusters, 2);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(data.points.rows()));

  std::normal_distribution<double> noise(0.0, std::sqrt(params.variance));
  Eigen::Index row = 0;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const int label = i * side + j;
      const double cx = i * params.separation;
      const double cy = j * params.separation;
      (*data.true_centers)(label, 0) = cx;
      (*data.true_centers)(label, 1) = cy;
      for (int p = 0; p < params.points_per; ++p, ++row) {
        const double dx = noise(rng);
        const double dy = noise(rng);
        data.points(row, 0) = cx + dx;
        data.points(row, 1) = cy + dy;
        labels.push_back(label);
      }
    }
  }
  data.gold_labels = std::move(labels);
  return data;
}

void write_synthetic_tsv(std::ostream& out, const LabeledDataset& data, const GridParams& params,
                         std::uint64_t seed) {
  out << "# synth grid_side=" << params.grid_side << " separation=" << format_real(params.separation)
      << " variance=" << format_real(params.variance) << " points_per=" << params.points_per
      << " seed=" << seed << "\n";
  out << "x\ty\tgold_label\n";
  const auto& gold = data.require_gold();
  for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
    out << format_real(data.points(i, 0)) << '\t' << format_real(data.points(i, 1)) << '\t'
        << gold[static_cast<std::size_t>(i)] << '\n';
  }
}

LabeledDataset parse_delimited(std::istream& in, const DelimitedOptions& options, std::string name) {
  LabeledDataset data;
  data.name = std::move(name);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::optional<std::size_t> arity;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = body.find(options.delimiter, start);
      fields.push_back(trim(body.substr(start, pos == std::string_view::npos ? body.size() - start
                                                                            : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (!arity) {
      arity = fields.size();
      if (options.label_column && *options.label_column >= *arity) {
        throw ParseError(data.name + ": row " + std::to_string(line_no) + " has " +
                         std::to_string(*arity) + " columns, label column " +
                         std::to_string(*options.label_column) + " is out of range");
      }
    } else if (fields.size() != *arity) {
      throw ParseError(data.name + ": row " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " columns, expected " + std::to_string(*arity));
    }
    if (std::any_of(fields.begin(), fields.end(), [](std::string_view f) { return f == "?"; })) {
      ++data.dropped_rows;
      continue;
    }
    std::vector<double> features;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (options.label_column && c == *options.label_column) {
        raw_labels.emplace_back(fields[c]);
        continue;
      }
      double v = 0.0;
      const char* first = fields[c].data();
      const char* last = first + fields[c].size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || fields[c].empty()) {
        throw ParseError(data.name + ": row " + std::to_string(line_no) + ", column " +
                         std::to_string(c) + ": '" + std::string(fields[c]) + "' is not a number");
      }
      features.push_back(v);
    }
    if (features.empty()) {
      throw ParseError(data.name + ": row " + std::to_string(line_no) + " has no feature columns");
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw ParseError(data.name + ": no data rows");

  data.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  if (options.label_column) {
    std::map<std::string, int> ids;
    std::vector<int> labels;
    labels.reserve(raw_labels.size());
    for (const auto& l : raw_labels) {
      labels.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
    }
    data.gold_labels = std::move(labels);
  }
  return data;
}

LabeledDataset load_delimited(const std::string& path, const DelimitedOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read dataset file '" + path + "'");
  return parse_delimited(in, options, path);
}

Eigen::MatrixXd standardize(const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out = points.rowwise() - points.colwise().mean();
  if (points.rows() < 2) return out;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(out.rows() - 1));
    if (sd > 0.0) out.col(c) /= sd;
  }
  return out;
}

const std::set<std::string>& default_time_tags() {
  static const std::set<std::string> tags{"DAY",   "NIGHT", "MORNING", "EVENING",   "AFTERNOON",
                                          "DUSK",  "DAWN",  "LATER",   "CONTINUOUS"};
  return tags;
}

bool is_scene_heading(std::string_view line) {
  std::string_view s = trim(line);
  strip_scene_number(s);
  return marker_length(s) > 0;
}

kernels::TokenList normalize_heading(std::string_view raw, const std::set<std::string>& time_tags) {
  std::string_view s = trim(raw);
  const bool numbered = strip_scene_number(s);
  s = trim(s.substr(marker_length(s)));

  std::string cleaned;
  cleaned.reserve(s.size());
  for (char c : upper(s)) {
    if (c == '\'') continue;
    cleaned.push_back(is_alnum(c) || c == '/' || c == '-' ? c : ' ');
  }
  kernels::TokenList tokens;
  std::string current;
  for (char c : cleaned) {
    if (c == ' ' || c == '/' || c == '-') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));

  while (!tokens.empty() &&
         (time_tags.count(tokens.back()) > 0 || (numbered && is_scene_number(tokens.back())))) {
    tokens.pop_back();
  }
  if (tokens.empty()) {
    throw DegenerateDataError("heading '" + std::string(trim(raw)) + "' has no location tokens");
  }
  return tokens;
}

std::vector<SceneBoundary> parse_screenplay(std::string_view text,
                                            const std::set<std::string>& time_tags,
                                            std::vector<std::string>* diagnostics) {
  std::vector<SceneBoundary> scenes;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    if (is_scene_heading(line)) {
      try {
        SceneBoundary b;
        b.location_tokens = normalize_heading(line, time_tags);
        b.scene_index = scenes.size();
        b.line_number = line_no;
        b.raw_heading = std::string(line);
        scenes.push_back(std::move(b));
      } catch (const DegenerateDataError& e) {
        if (diagnostics) diagnostics->push_back("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return scenes;
}

std::vector<int> parse_gold_sidecar(std::istream& in, std::size_t scene_count) {
  std::vector<std::optional<int>> labels(scene_count);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::size_t tab = body.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("gold file line " + std::to_string(line_no) + ": expected scene_index<TAB>cluster_id");
    }
    const std::string_view idx_s = trim(body.substr(0, tab));
    const std::string_view cid_s = trim(body.substr(tab + 1));
    std::size_t idx = 0;
    int cid = 0;
    const auto r1 = std::from_chars(idx_s.data(), idx_s.data() + idx_s.size(), idx);
    const auto r2 = std::from_chars(cid_s.data(), cid_s.data() + cid_s.size(), cid);
    if (r1.ec != std::errc() || r1.ptr != idx_s.data() + idx_s.size() || r2.ec != std::errc() ||
        r2.ptr != cid_s.data() + cid_s.size()) {
      throw ParseError("gold file line " + std::to_string(line_no) + ": non-integer field");
    }
    if (idx >= scene_count) {
      throw ParseError("gold file line " + std::to_string(line_no) + ": unknown scene index " +
                       std::to_string(idx) + " (screenplay has " + std::to_string(scene_count) + " scenes)");
    }
    if (labels[idx]) {
      throw ParseError("gold file line " + std::to_string(line_no) + ": scene " + std::to_string(idx) +
                       " labeled twice");
    }
    labels[idx] = cid;
  }
  std::vector<int> out;
  out.reserve(scene_count);
  for (std::size_t i = 0; i < scene_count; ++i) {
    if (!labels[i]) throw ParseError("gold file: scene " + std::to_string(i) + " has no cluster id");
    out.push_back(*labels[i]);
  }
  return out;
}

std::vector<int> load_gold_sidecar(const std::string& path, std::size_t scene_count) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read gold file '" + path + "'");
  return parse_gold_sidecar(in, scene_count);
}

LabeledDataset screenplay_dataset(const std::vector<SceneBoundary>& scenes, std::string name,
                                  std::optional<std::vector<int>> gold) {
  LabeledDataset data;
  data.name = std::move(name);
  data.texts.reserve(scenes.size());
  for (const auto& s : scenes) data.texts.push_back(s.location_tokens);
  if (gold && gold->size() != scenes.size()) {
    throw InvalidInput("screenplay_dataset: gold labels do not match the scene count");
  }
  data.gold_labels = std::move(gold);
  return data;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dppkm::datasets
