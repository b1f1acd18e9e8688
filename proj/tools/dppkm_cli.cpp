#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dppkm/clustering.hpp"
#include "dppkm/datasets.hpp"
#include "dppkm/dpp.hpp"
#include "dppkm/errors.hpp"
#include "dppkm/experiments.hpp"
#include "dppkm/kernels.hpp"

namespace {

using namespace dppkm;
namespace ex = dppkm::experiments;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<clustering::SeedMethod> parse_methods(const std::string& text) {
  std::vector<clustering::SeedMethod> methods;
  for (const auto& name : split_list(text)) {
    const auto m = clustering::parse_seed_method(name);
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
  }
  if (methods.empty()) throw UsageError("--methods: no seeding method given");
  return methods;
}

std::vector<int> parse_grids(const std::string& text) {
  std::vector<int> sides;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      sides.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--grids: '" + item + "' is not a positive integer");
    }
  }
  if (sides.empty()) throw UsageError("--grids: no grid size given");
  return sides;
}

eval::F1Matching parse_matching(const std::string& text) {
  if (text == "best") return eval::F1Matching::best_match;
  if (text == "hungarian") return eval::F1Matching::hungarian;
  throw UsageError("--matching must be 'best' or 'hungarian', got '" + text + "'");
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

struct Common {
  std::string output;
  int runs = 50;
  std::uint64_t seed = 0;
  int jobs = 1;
  int max_iter = clustering::kDefaultMaxIter;

  ex::RunOptions run_options() const {
    if (runs < 1) throw UsageError("--runs must be at least 1");
    if (jobs < 1) throw UsageError("--jobs must be at least 1");
    if (max_iter < 1) throw UsageError("--max-iter must be at least 1");
    return {runs, seed, max_iter, jobs};
  }
};

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Write the TSV to this file instead of standard output");
}

void add_run_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--runs", c.runs, "Independent runs per configuration")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master seed; run r uses seed + r")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads (results do not depend on this)")
      ->capture_default_str();
  cmd->add_option("--max-iter", c.max_iter, "Lloyd iteration cap")->capture_default_str();
  add_output(cmd, c);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

datasets::LabeledDataset load_vectors(const std::string& path, std::optional<std::size_t> label_col,
                                      const std::string& delimiter) {
  if (delimiter.size() != 1 && delimiter != "tab") {
    throw UsageError("--delimiter must be a single character or 'tab'");
  }
  datasets::DelimitedOptions opts;
  opts.label_column = label_col;
  opts.delimiter = delimiter == "tab" ? '\t' : delimiter[0];
  return datasets::load_delimited(path, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DPP-seeded k-means toolkit: experiment runners, samplers and the lemma verifier.\n"
               "Every subcommand writes a TSV table behind '#' provenance lines."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ex::kVersion));

  Common common;

  // synth
  auto* synth = app.add_subcommand("synth", "Gaussian-grid experiment: missed clusters and inferred k");
  std::string grids = "2,3,4,5,6,10";
  double sep = 10.0, var = 1.0;
  int points = 100;
  std::string synth_methods = "rand,pp,dpp,dppk";
  std::optional<double> synth_sigma;
  synth->add_option("--grids", grids, "Comma-separated grid sides (k_true = side^2)")->capture_default_str();
  synth->add_option("--sep", sep, "Spacing between neighbouring centers")->capture_default_str();
  synth->add_option("--var", var, "Per-coordinate variance of each Gaussian")->capture_default_str();
  synth->add_option("--points", points, "Points per Gaussian")->capture_default_str();
  synth->add_option("--methods", synth_methods, "Seeding methods: rand,pp,dpp,dppk,sequential")
      ->capture_default_str();
  synth->add_option("--sigma", synth_sigma, "RBF sigma in exp(-sigma*d^2) (default 1/(2*sep^2))");
  add_run_flags(synth, common);

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark dataset experiment: k, F1 and k-means cost");
  std::string bench_data;
  std::optional<std::size_t> bench_label_col, bench_k;
  std::string bench_methods = "pp,dpp,dppk";
  std::optional<double> bench_sigma;
  bool bench_standardize = false;
  std::string bench_matching = "best";
  std::string bench_delim = ",";
  bench->add_option("--data", bench_data, "Delimited numeric file")->required();
  bench->add_option("--label-col", bench_label_col, "0-based column holding the gold label");
  bench->add_option("--k", bench_k, "Clusters for fixed-k methods (default: gold class count)");
  bench->add_option("--methods", bench_methods, "Seeding methods: rand,pp,dpp,dppk,sequential")
      ->capture_default_str();
  bench->add_option("--sigma", bench_sigma, "RBF sigma (default: median heuristic)");
  bench->add_flag("--standardize", bench_standardize, "Scale columns to zero mean, unit variance");
  bench->add_option("--matching", bench_matching, "F1 matching: best or hungarian")->capture_default_str();
  bench->add_option("--delimiter", bench_delim, "Field delimiter (single character or 'tab')")
      ->capture_default_str();
  add_run_flags(bench, common);

  // screenplay
  auto* play = app.add_subcommand("screenplay", "Scene-location clustering over screenplay headings");
  std::vector<std::string> play_inputs, play_golds;
  int ngram = 2;
  std::string play_methods = "rand,pp,dppk";
  std::string play_matching = "best";
  std::string time_tags;
  play->add_option("--input", play_inputs, "Screenplay text file (repeatable)")->required();
  play->add_option("--gold", play_golds,
                   "Gold sidecar per --input, in the same order ('-' for none; repeatable)");
  play->add_option("--ngram", ngram, "Longest contiguous word n-gram in the kernel")->capture_default_str();
  play->add_option("--methods", play_methods, "Fixed-k seeding methods scored by F1")->capture_default_str();
  play->add_option("--matching", play_matching, "F1 matching: best or hungarian")->capture_default_str();
  play->add_option("--time-tags", time_tags,
                   "Comma-separated time-of-day tags stripped from headings "
                   "(default DAY,NIGHT,MORNING,EVENING,AFTERNOON,DUSK,DAWN,LATER,CONTINUOUS)");
  add_run_flags(play, common);

  // verify
  auto* verify = app.add_subcommand("verify", "Scan the three-point counterexample over an epsilon grid");
  ex::VerifyConfig vcfg;
  verify->add_option("--sigma", vcfg.sigma, "RBF sigma")->capture_default_str();
  verify->add_option("--bigd", vcfg.half_separation,
                     "Half distance D between the selected points -D and +D")
      ->capture_default_str();
  verify->add_option("--eps-grid", vcfg.eps_grid, "Grid points eps = D*i/(N+1), i=1..N")
      ->capture_default_str();
  add_output(verify, common);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw one DPP sample from a dataset's RBF kernel");
  std::string sample_data, sample_mode = "dpp", sample_delim = ",";
  std::optional<std::size_t> sample_k, sample_label_col;
  std::optional<double> sample_sigma;
  bool sample_standardize = false;
  sample->add_option("--data", sample_data, "Delimited numeric file");
  sample->add_option("--mode", sample_mode, "dpp, kdpp or sequential")->capture_default_str();
  sample->add_option("--k", sample_k, "Sample size for kdpp and sequential");
  sample->add_option("--seed", common.seed, "Seed")->capture_default_str();
  sample->add_option("--sigma", sample_sigma, "RBF sigma (default: median heuristic)");
  sample->add_option("--label-col", sample_label_col, "0-based label column to exclude from features");
  sample->add_flag("--standardize", sample_standardize, "Scale columns to zero mean, unit variance");
  sample->add_option("--delimiter", sample_delim, "Field delimiter")->capture_default_str();
  add_output(sample, common);

  // dpp-diag
  auto* diag = app.add_subcommand("dpp-diag", "Eigen-spectrum and expected DPP size of a dataset");
  std::string diag_data, diag_delim = ",";
  std::optional<std::size_t> diag_label_col;
  std::optional<double> diag_sigma;
  bool diag_standardize = false;
  diag->add_option("--data", diag_data, "Delimited numeric file")->required();
  diag->add_option("--sigma", diag_sigma, "RBF sigma (default: median heuristic)");
  diag->add_option("--label-col", diag_label_col, "0-based label column to exclude from features");
  diag->add_flag("--standardize", diag_standardize, "Scale columns to zero mean, unit variance");
  diag->add_option("--delimiter", diag_delim, "Field delimiter")->capture_default_str();
  add_output(diag, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::string text;
    if (synth->parsed()) {
      ex::SyntheticConfig cfg;
      cfg.grid_sides = parse_grids(grids);
      cfg.separation = sep;
      cfg.variance = var;
      cfg.points_per = points;
      cfg.methods = parse_methods(synth_methods);
      cfg.sigma = synth_sigma;
      cfg.run = common.run_options();
      text = ex::run_synthetic(cfg).table.to_tsv();
    } else if (bench->parsed()) {
      ex::BenchmarkConfig cfg;
      cfg.k = bench_k;
      cfg.methods = parse_methods(bench_methods);
      cfg.sigma = bench_sigma;
      cfg.standardize = bench_standardize;
      cfg.matching = parse_matching(bench_matching);
      cfg.run = common.run_options();
      const auto data = load_vectors(bench_data, bench_label_col, bench_delim);
      text = ex::run_benchmark(cfg, data).table.to_tsv();
    } else if (play->parsed()) {
      ex::ScreenplayConfig cfg;
      cfg.max_ngram = ngram;
      cfg.methods = parse_methods(play_methods);
      cfg.matching = parse_matching(play_matching);
      cfg.run = common.run_options();
      if (!play_golds.empty() && play_golds.size() != play_inputs.size()) {
        throw UsageError("--gold given " + std::to_string(play_golds.size()) + " times for " +
                         std::to_string(play_inputs.size()) + " --input files (use '-' for none)");
      }
      std::set<std::string> tags = datasets::default_time_tags();
      if (!time_tags.empty()) {
        tags.clear();
        for (auto& t : split_list(time_tags)) {
          std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::toupper(ch); });
          tags.insert(t);
        }
      }
      std::vector<ex::ScreenplayInput> inputs;
      for (std::size_t i = 0; i < play_inputs.size(); ++i) {
        std::vector<std::string> diagnostics;
        ex::ScreenplayInput in;
        in.name = stem_of(play_inputs[i]);
        in.scenes = datasets::parse_screenplay(datasets::read_file(play_inputs[i]), tags, &diagnostics);
        for (const auto& d : diagnostics) std::cerr << play_inputs[i] << ": " << d << '\n';
        if (!play_golds.empty() && play_golds[i] != "-") {
          in.gold = datasets::load_gold_sidecar(play_golds[i], in.scenes.size());
        }
        inputs.push_back(std::move(in));
      }
      text = ex::run_screenplay(cfg, inputs).table.to_tsv();
    } else if (verify->parsed()) {
      text = ex::run_verify(vcfg).table.to_tsv();
    } else if (sample->parsed()) {
      if (sample_mode != "dpp" && sample_mode != "kdpp" && sample_mode != "sequential") {
        throw UsageError("--mode must be dpp, kdpp or sequential, got '" + sample_mode + "'");
      }
      if (sample_mode != "dpp") {
        if (!sample_k) throw UsageError("--mode " + sample_mode + " requires --k");
        if (*sample_k < 1) throw UsageError("--k must be at least 1");
      }
      if (sample_data.empty()) throw UsageError("--data is required");
      const auto data = load_vectors(sample_data, sample_label_col, sample_delim);
      const Eigen::MatrixXd pts = sample_standardize ? datasets::standardize(data.points) : data.points;
      const double sigma = sample_sigma.value_or(kernels::median_sigma(pts));
      const auto gram = kernels::rbf_gram(pts, sigma);
      Rng rng = derive_rng(common.seed, 0);
      dpp::DppSample s;
      if (sample_mode == "dpp") {
        s = dpp::dpp_sample(gram, rng);
      } else if (sample_mode == "kdpp") {
        s = dpp::kdpp_sample(gram, *sample_k, rng);
      } else {
        s = dpp::sequential_sample(gram, *sample_k, rng);
      }
      ex::ResultTable t;
      t.provenance = {std::string("dppkm ") + ex::kVersion, "family=sample", "dataset=" + data.name,
                      "n=" + std::to_string(data.size()), "mode=" + sample_mode,
                      "k=" + (sample_k ? std::to_string(*sample_k) : std::string("NA")),
                      "sigma=" + ex::format_real(sigma) + (sample_sigma ? " (user)" : " (median heuristic)"),
                      std::string("standardize=") + (sample_standardize ? "true" : "false"),
                      "seed=" + std::to_string(common.seed), "size=" + std::to_string(s.size()),
                      "uniform_fallbacks=" + std::to_string(s.uniform_fallbacks)};
      t.columns = {"draw_position", "index"};
      for (std::size_t i = 0; i < s.draw_order.size(); ++i) {
        t.rows.push_back({std::to_string(i), std::to_string(s.draw_order[i])});
      }
      text = t.to_tsv();
    } else if (diag->parsed()) {
      const auto data = load_vectors(diag_data, diag_label_col, diag_delim);
      text = ex::run_dpp_diag(data, diag_sigma, diag_standardize).table.to_tsv();
    }
    emit(text, common.output);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // InvalidInput and PreconditionError: the request itself is unusable
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
