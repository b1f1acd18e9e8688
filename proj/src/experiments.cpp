#include "dppkm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "dppkm/errors.hpp"
#include "dppkm/kernels.hpp"

namespace dppkm::experiments {

namespace {

std::string format_precise(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string join_methods(const std::vector<SeedMethod>& methods) {
  std::string out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) out += ',';
    out += clustering::to_string(methods[i]);
  }
  return out;
}

std::string to_string(eval::F1Matching m) {
  return m == eval::F1Matching::best_match ? "best" : "hungarian";
}

bool has(const std::vector<SeedMethod>& methods, SeedMethod m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

bool needs_sampler(const std::vector<SeedMethod>& methods) {
  return has(methods, SeedMethod::dpp) || has(methods, SeedMethod::dppk);
}

std::uint64_t method_stream(SeedMethod m) { return static_cast<std::uint64_t>(m) + 1; }

void validate_run(const RunOptions& run) {
  if (run.runs < 1) throw InvalidInput("runs must be at least 1");
  if (run.jobs < 1) throw InvalidInput("jobs must be at least 1");
  if (run.max_iter < 1) throw InvalidInput("max-iter must be at least 1");
}

std::vector<std::string> run_echo(const RunOptions& run) {
  return {"runs=" + std::to_string(run.runs), "seed=" + std::to_string(run.master_seed),
          "max_iter=" + std::to_string(run.max_iter),
          "run_seed_rule=master_seed+run_index"};
}

// Runs body(run_index) for every index on up to `jobs` threads. Each call
// must only write to its own slot; the first exception is rethrown.
template <class Body>
void for_each_run(int runs, int jobs, Body&& body) {
  const int workers = std::max(1, std::min(jobs, runs));
  if (workers == 1) {
    for (int r = 0; r < runs; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < runs; r = next++) {
        try {
          body(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

clustering::SeedSet draw_seeds(SeedMethod method, std::size_t n, std::size_t k,
                               const clustering::SqDistance& dist2, const dpp::Sampler* sampler,
                               const kernels::GramMatrix* gram, Rng& rng) {
  switch (method) {
    case SeedMethod::rand: return clustering::init_random(n, k, rng);
    case SeedMethod::pp: return clustering::init_kmeanspp(dist2, n, k, rng);
    case SeedMethod::dpp: return clustering::init_dpp(*sampler, rng);
    case SeedMethod::dppk: return clustering::init_kdpp(*sampler, k, rng);
    case SeedMethod::sequential: return clustering::init_sequential(*gram, k, rng);
  }
  throw InvalidInput("unknown seeding method");
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::string summary_mean(const std::optional<eval::RunSummary>& s) {
  return s ? format_real(s->mean) : "NA";
}
std::string summary_std(const std::optional<eval::RunSummary>& s) {
  return s ? format_real(s->std) : "NA";
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void ResultTable::write_tsv(std::ostream& out) const {
  for (const auto& line : provenance) out << "# " << line << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "\t" : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << row[c];
    out << '\n';
  }
}

std::string ResultTable::to_tsv() const {
  std::ostringstream ss;
  write_tsv(ss);
  return ss.str();
}

std::size_t ResultTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidInput("result table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double grid_sigma(double separation) {
  if (!(separation > 0.0)) throw InvalidInput("grid_sigma: separation must be positive");
  return 1.0 / (2.0 * separation * separation);
}

// ---------------------------------------------------------------------------

SyntheticReport run_synthetic(const SyntheticConfig& cfg) {
  validate_run(cfg.run);
  if (cfg.methods.empty()) throw InvalidInput("synthetic: method set is empty");
  if (cfg.grid_sides.empty()) throw InvalidInput("synthetic: no grid sizes");
  const double sigma = cfg.sigma.value_or(grid_sigma(cfg.separation));

  SyntheticReport report;
  for (int side : cfg.grid_sides) {
    datasets::GridParams params{side, cfg.separation, cfg.variance, cfg.points_per};
    Rng data_rng = derive_rng(cfg.run.master_seed, 0, 0xDA7A0000ull + static_cast<std::uint64_t>(side));
    const datasets::LabeledDataset data = datasets::synth_gaussian_grid(params, data_rng);
    const std::size_t n = data.size();
    const auto k_true = static_cast<std::size_t>(side * side);

    std::optional<kernels::GramMatrix> gram;
    std::optional<dpp::Sampler> sampler;
    if (needs_sampler(cfg.methods) || has(cfg.methods, SeedMethod::sequential)) {
      gram = kernels::rbf_gram(data.points, sigma);
    }
    if (needs_sampler(cfg.methods)) sampler.emplace(*gram);

    GridOutcome outcome;
    outcome.grid_side = side;
    outcome.k_true = static_cast<int>(k_true);
    outcome.n = n;
    outcome.sigma = sigma;
    if (sampler) outcome.expected_dpp_size = sampler->expected_size();

    const auto dist2 = [&data](std::size_t i, std::size_t j) {
      return kernels::sq_distance(data.points, i, j);
    };
    const auto runs = static_cast<std::size_t>(cfg.run.runs);
    std::map<SeedMethod, std::vector<int>> missed;
    for (SeedMethod m : cfg.methods) missed[m].assign(runs, 0);
    std::vector<double> inferred(runs, 0.0);

    for_each_run(cfg.run.runs, cfg.run.jobs, [&](int r) {
      const auto run = static_cast<std::size_t>(r);
      for (SeedMethod m : cfg.methods) {
        Rng rng = derive_rng(cfg.run.master_seed, run,
                             static_cast<std::uint64_t>(side) * 16 + method_stream(m));
        const auto seeds = draw_seeds(m, n, k_true, dist2, sampler ? &*sampler : nullptr,
                                      gram ? &*gram : nullptr, rng);
        const auto result = clustering::lloyd_vector(data.points, seeds, cfg.run.max_iter);
        missed[m][run] = eval::missed_clusters(result.centroids, *data.true_centers);
        if (m == SeedMethod::dpp) inferred[run] = static_cast<double>(seeds.inferred_k());
      }
    });

    for (SeedMethod m : cfg.methods) {
      outcome.median_missed[m] = eval::median(as_doubles(missed[m]));
    }
    outcome.missed = std::move(missed);
    if (has(cfg.methods, SeedMethod::dpp)) {
      outcome.inferred_k = inferred;
      outcome.inferred_k_summary = eval::summarize(inferred, "dpp_k");
    }
    report.grids.push_back(std::move(outcome));
  }

  if (has(cfg.methods, SeedMethod::dpp) && report.grids.size() >= 2) {
    std::vector<double> kt, kd;
    for (const auto& g : report.grids) {
      kt.push_back(g.k_true);
      kd.push_back(g.inferred_k_summary->mean);
    }
    try {
      report.k_correlation = eval::pearson(kd, kt);
    } catch (const DegenerateDataError&) {
      report.k_correlation.reset();
    }
  }

  ResultTable& t = report.table;
  std::string sides;
  for (std::size_t i = 0; i < cfg.grid_sides.size(); ++i) {
    sides += (i ? "," : "") + std::to_string(cfg.grid_sides[i]);
  }
  t.provenance = {std::string("dppkm ") + kVersion, "family=synthetic", "grids=" + sides,
                  "separation=" + format_precise(cfg.separation),
                  "variance=" + format_precise(cfg.variance),
                  "points_per=" + std::to_string(cfg.points_per), "methods=" + join_methods(cfg.methods),
                  "sigma=" + format_precise(sigma) + (cfg.sigma ? " (user)" : " (1/(2*separation^2))"),
                  "statistic=median over runs"};
  for (auto& line : run_echo(cfg.run)) t.provenance.push_back(std::move(line));
  if (report.k_correlation) {
    t.provenance.push_back("summary: pearson(dpp_k_mean, k_true)=" + format_real(*report.k_correlation));
  }

  t.columns = {"grid_side", "k_true", "n", "sigma", "dpp_expected_size"};
  for (SeedMethod m : cfg.methods) t.columns.push_back("missed_median_" + clustering::to_string(m));
  if (has(cfg.methods, SeedMethod::dpp)) {
    t.columns.insert(t.columns.end(), {"dpp_k_mean", "dpp_k_std", "dpp_k_median"});
  }
  std::map<SeedMethod, double> totals;
  for (const auto& g : report.grids) {
    std::vector<std::string> row{std::to_string(g.grid_side), std::to_string(g.k_true),
                                 std::to_string(g.n), format_precise(g.sigma),
                                 needs_sampler(cfg.methods) ? format_real(g.expected_dpp_size) : "NA"};
    for (SeedMethod m : cfg.methods) {
      row.push_back(format_real(g.median_missed.at(m)));
      totals[m] += g.median_missed.at(m);
    }
    if (g.inferred_k_summary) {
      row.push_back(format_real(g.inferred_k_summary->mean));
      row.push_back(format_real(g.inferred_k_summary->std));
      row.push_back(format_real(eval::median(g.inferred_k)));
    }
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> total_row{"total", "NA", "NA", "NA", "NA"};
  for (SeedMethod m : cfg.methods) total_row.push_back(format_real(totals[m]));
  if (has(cfg.methods, SeedMethod::dpp)) total_row.insert(total_row.end(), {"NA", "NA", "NA"});
  t.rows.push_back(std::move(total_row));
  return report;
}

// ---------------------------------------------------------------------------

const MethodOutcome& BenchmarkReport::method(SeedMethod m) const {
  for (const auto& o : methods) {
    if (o.method == m) return o;
  }
  throw InvalidInput("benchmark report has no results for method " + clustering::to_string(m));
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const datasets::LabeledDataset& data) {
  validate_run(cfg.run);
  if (cfg.methods.empty()) throw InvalidInput("benchmark: method set is empty");
  if (data.is_text()) throw InvalidInput("benchmark: expected vector data");

  const Eigen::MatrixXd points = cfg.standardize ? datasets::standardize(data.points) : data.points;
  const std::size_t n = data.size();
  const bool fixed_k_methods = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                           [](SeedMethod m) { return m != SeedMethod::dpp; });
  std::size_t k = 0;
  if (cfg.k) {
    k = *cfg.k;
  } else if (data.gold_labels) {
    k = data.gold_class_count();
  } else if (fixed_k_methods) {
    throw InvalidInput("benchmark: no k given and the dataset has no gold labels");
  }
  if (fixed_k_methods && (k == 0 || k > n)) {
    throw InvalidInput("benchmark: k must lie in [1, " + std::to_string(n) + "]");
  }

  BenchmarkReport report;
  report.dataset = data.name;
  report.n = n;
  report.k_true = data.gold_labels ? data.gold_class_count() : 0;
  report.sigma = cfg.sigma.value_or(0.0);
  const bool wants_gram = needs_sampler(cfg.methods) || has(cfg.methods, SeedMethod::sequential);
  if (wants_gram && !cfg.sigma) report.sigma = kernels::median_sigma(points);

  std::optional<kernels::GramMatrix> gram;
  std::optional<dpp::Sampler> sampler;
  if (wants_gram) gram = kernels::rbf_gram(points, report.sigma);
  if (needs_sampler(cfg.methods)) sampler.emplace(*gram);

  const auto dist2 = [&points](std::size_t i, std::size_t j) {
    return kernels::sq_distance(points, i, j);
  };
  const auto runs = static_cast<std::size_t>(cfg.run.runs);
  for (SeedMethod m : cfg.methods) {
    MethodOutcome o;
    o.method = m;
    o.k.assign(runs, 0.0);
    o.cost.assign(runs, 0.0);
    if (m != SeedMethod::dpp && data.gold_labels) o.f1.assign(runs, 0.0);
    report.methods.push_back(std::move(o));
  }

  for_each_run(cfg.run.runs, cfg.run.jobs, [&](int r) {
    const auto run = static_cast<std::size_t>(r);
    for (auto& o : report.methods) {
      Rng rng = derive_rng(cfg.run.master_seed, run, method_stream(o.method));
      const auto seeds = draw_seeds(o.method, n, k, dist2, sampler ? &*sampler : nullptr,
                                    gram ? &*gram : nullptr, rng);
      const auto result = clustering::lloyd_vector(points, seeds, cfg.run.max_iter);
      o.k[run] = static_cast<double>(seeds.inferred_k());
      o.cost[run] = result.cost;
      if (!o.f1.empty()) o.f1[run] = eval::f1_macro(result.assignments, *data.gold_labels, cfg.matching);
    }
  });

  for (auto& o : report.methods) {
    o.k_summary = eval::summarize(o.k, "k");
    o.cost_summary = eval::summarize(o.cost, "cost");
    std::vector<double> per_point(o.cost);
    for (double& c : per_point) c /= static_cast<double>(n);
    o.cost_per_point_summary = eval::summarize(per_point, "cost_per_point");
    if (!o.f1.empty()) o.f1_summary = eval::summarize(o.f1, "f1");
  }

  ResultTable& t = report.table;
  t.provenance = {std::string("dppkm ") + kVersion, "family=benchmark", "dataset=" + data.name,
                  "n=" + std::to_string(n), "dropped_rows=" + std::to_string(data.dropped_rows),
                  "k=" + (fixed_k_methods ? std::to_string(k) : std::string("NA")),
                  "methods=" + join_methods(cfg.methods),
                  "sigma=" + (wants_gram ? format_precise(report.sigma) : std::string("NA")) +
                      (cfg.sigma ? " (user)" : " (median heuristic)"),
                  std::string("standardize=") + (cfg.standardize ? "true" : "false"),
                  "f1_matching=" + to_string(cfg.matching), "statistic=mean and sample std over runs"};
  for (auto& line : run_echo(cfg.run)) t.provenance.push_back(std::move(line));
  t.columns = {"method", "k_true", "k_mean", "k_std", "f1_mean", "f1_std",
               "cost_mean", "cost_std", "cost_per_point_mean", "cost_per_point_std"};
  for (const auto& o : report.methods) {
    t.rows.push_back({clustering::to_string(o.method),
                      data.gold_labels ? std::to_string(report.k_true) : "NA",
                      summary_mean(o.k_summary), summary_std(o.k_summary),
                      summary_mean(o.f1_summary), summary_std(o.f1_summary),
                      summary_mean(o.cost_summary), summary_std(o.cost_summary),
                      summary_mean(o.cost_per_point_summary), summary_std(o.cost_per_point_summary)});
  }
  return report;
}

// ---------------------------------------------------------------------------

ScreenplayReport run_screenplay(const ScreenplayConfig& cfg, const std::vector<ScreenplayInput>& inputs) {
  validate_run(cfg.run);
  if (cfg.methods.empty()) throw InvalidInput("screenplay: method set is empty");
  if (inputs.empty()) throw InvalidInput("screenplay: no screenplays given");

  ScreenplayReport report;
  const auto runs = static_cast<std::size_t>(cfg.run.runs);
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const auto& in = inputs[s];
    if (in.scenes.size() < 2) {
      throw InvalidInput("screenplay '" + in.name + "': need at least 2 scene boundaries, found " +
                         std::to_string(in.scenes.size()));
    }
    const auto data = datasets::screenplay_dataset(in.scenes, in.name, in.gold);
    const auto gram = kernels::word_ngram_gram(data.texts, cfg.max_ngram);
    const dpp::Sampler sampler(gram);
    const std::size_t n = data.size();

    ScreenplayOutcome o;
    o.name = in.name;
    o.n = n;
    o.log_k = eval::heuristic_k(n, eval::HeuristicK::log10);
    o.sqrt_k = eval::heuristic_k(n, eval::HeuristicK::sqrt);
    if (data.gold_labels) o.gold_k = data.gold_class_count();

    std::vector<SeedMethod> f1_methods;
    if (o.gold_k) {
      for (SeedMethod m : cfg.methods) {
        if (m == SeedMethod::dpp) continue;
        if ((m == SeedMethod::dppk) && *o.gold_k > sampler.rank()) {
          report.notices.push_back(in.name + ": dppk skipped, gold k " + std::to_string(*o.gold_k) +
                                   " exceeds kernel rank " + std::to_string(sampler.rank()));
          continue;
        }
        f1_methods.push_back(m);
      }
    } else {
      report.notices.push_back(in.name + ": no gold file, F1 columns omitted");
    }

    const auto dist2 = [&gram](std::size_t i, std::size_t j) {
      return kernels::kernel_sq_distance(gram, i, j);
    };
    std::vector<double> inferred(runs, 0.0);
    std::map<SeedMethod, std::vector<double>> f1;
    for (SeedMethod m : f1_methods) f1[m].assign(runs, 0.0);
    for_each_run(cfg.run.runs, cfg.run.jobs, [&](int r) {
      const auto run = static_cast<std::size_t>(r);
      const std::uint64_t base = static_cast<std::uint64_t>(s) * 16;
      Rng dpp_rng = derive_rng(cfg.run.master_seed, run, base + method_stream(SeedMethod::dpp));
      inferred[run] = static_cast<double>(clustering::init_dpp(sampler, dpp_rng).inferred_k());
      for (SeedMethod m : f1_methods) {
        Rng rng = derive_rng(cfg.run.master_seed, run, base + method_stream(m));
        const auto seeds = draw_seeds(m, n, *o.gold_k, dist2, &sampler, &gram, rng);
        const auto result = clustering::lloyd_kernel(gram, seeds, cfg.run.max_iter);
        f1[m][run] = eval::f1_macro(result.assignments, *data.gold_labels, cfg.matching);
      }
    });
    o.inferred_k = inferred;
    o.inferred_k_summary = eval::summarize(inferred, "dpp_k");
    for (auto& [m, values] : f1) o.f1.emplace(m, eval::summarize(values, "f1"));
    report.screenplays.push_back(std::move(o));
  }

  std::vector<const ScreenplayOutcome*> with_gold;
  for (const auto& o : report.screenplays) {
    if (o.gold_k) with_gold.push_back(&o);
  }
  if (with_gold.size() >= 2) {
    std::vector<double> gold, n, lg, sq, dk;
    for (const auto* o : with_gold) {
      gold.push_back(static_cast<double>(*o->gold_k));
      n.push_back(static_cast<double>(o->n));
      lg.push_back(o->log_k);
      sq.push_back(o->sqrt_k);
      dk.push_back(o->inferred_k_summary.mean);
    }
    const std::pair<const char*, const std::vector<double>*> predictors[] = {
        {"n", &n}, {"log_n", &lg}, {"sqrt_n", &sq}, {"dpp_k_mean", &dk}};
    for (const auto& [name, values] : predictors) {
      try {
        report.correlation_with_gold[name] = eval::pearson(*values, gold);
      } catch (const DegenerateDataError&) {
        report.notices.push_back(std::string("correlation for ") + name + " undefined (zero variance)");
      }
    }
  }

  ResultTable& t = report.table;
  t.provenance = {std::string("dppkm ") + kVersion, "family=screenplay",
                  "ngram=" + std::to_string(cfg.max_ngram), "methods=" + join_methods(cfg.methods),
                  "kernel=word_ngram (cosine-normalized)", "f1_matching=" + to_string(cfg.matching),
                  "log_base=10", "statistic=mean and sample std over runs"};
  for (auto& line : run_echo(cfg.run)) t.provenance.push_back(std::move(line));
  for (const auto& notice : report.notices) t.provenance.push_back("notice: " + notice);

  t.columns = {"screenplay", "n", "gold_k", "log_n", "sqrt_n", "dpp_k_mean", "dpp_k_std"};
  for (SeedMethod m : cfg.methods) {
    if (m == SeedMethod::dpp) continue;
    t.columns.push_back("f1_mean_" + clustering::to_string(m));
    t.columns.push_back("f1_std_" + clustering::to_string(m));
  }
  for (const auto& o : report.screenplays) {
    std::vector<std::string> row{o.name, std::to_string(o.n),
                                 o.gold_k ? std::to_string(*o.gold_k) : "NA", format_real(o.log_k),
                                 format_real(o.sqrt_k), format_real(o.inferred_k_summary.mean),
                                 format_real(o.inferred_k_summary.std)};
    for (SeedMethod m : cfg.methods) {
      if (m == SeedMethod::dpp) continue;
      const auto it = o.f1.find(m);
      row.push_back(it == o.f1.end() ? "NA" : format_real(it->second.mean));
      row.push_back(it == o.f1.end() ? "NA" : format_real(it->second.std));
    }
    t.rows.push_back(std::move(row));
  }
  if (!report.correlation_with_gold.empty()) {
    const auto corr = [&](const char* key) {
      const auto it = report.correlation_with_gold.find(key);
      return it == report.correlation_with_gold.end() ? std::string("NA") : format_real(it->second);
    };
    std::vector<std::string> row{"correlation_with_gold_k", corr("n"), format_real(1.0),
                                 corr("log_n"), corr("sqrt_n"), corr("dpp_k_mean"), "NA"};
    row.resize(t.columns.size(), "NA");
    t.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------

VerifyReport run_verify(const VerifyConfig& cfg) {
  VerifyReport report;
  report.bound = dpp::min_half_separation(cfg.sigma);
  report.grid = dpp::scan_counterexample(cfg.half_separation, cfg.sigma, cfg.eps_grid);
  for (const auto& r : report.grid) {
    if (r.beyond_preferred) ++report.witnesses;
    if (!r.chain_consistent()) ++report.chain_violations;
  }
  ResultTable& t = report.table;
  t.provenance = {std::string("dppkm ") + kVersion, "family=verify",
                  "sigma=" + format_precise(cfg.sigma), "bigd=" + format_precise(cfg.half_separation),
                  "eps_grid=" + std::to_string(cfg.eps_grid),
                  "bound=sqrt(ln6/(4*sigma))=" + format_precise(report.bound),
                  "points: x1=-D x2=+D x3'=2D-eps x3''=0, S={x1,x2}",
                  "summary: witnesses=" + std::to_string(report.witnesses) +
                      " chain_violations=" + std::to_string(report.chain_violations)};
  t.columns = {"epsilon", "p_beyond", "p_midpoint", "beyond_preferred", "eq2", "eq3", "eq4", "eq5",
               "chain_ok"};
  const auto b = [](bool v) { return std::string(v ? "1" : "0"); };
  for (const auto& r : report.grid) {
    t.rows.push_back({format_precise(r.epsilon), format_precise(r.p_beyond), format_precise(r.p_midpoint),
                      b(r.beyond_preferred), b(r.eq2), b(r.eq3), b(r.eq4), b(r.eq5),
                      b(r.chain_consistent())});
  }
  return report;
}

DiagReport run_dpp_diag(const datasets::LabeledDataset& data, std::optional<double> sigma,
                        bool standardize) {
  const Eigen::MatrixXd points = standardize ? datasets::standardize(data.points) : data.points;
  DiagReport report;
  report.sigma = sigma.value_or(kernels::median_sigma(points));
  const dpp::Sampler sampler(kernels::rbf_gram(points, report.sigma));
  report.eigenvalues = sampler.spectrum().values;
  report.expected_size = sampler.expected_size();
  report.rank = sampler.rank();

  ResultTable& t = report.table;
  t.provenance = {std::string("dppkm ") + kVersion, "family=dpp-diag", "dataset=" + data.name,
                  "n=" + std::to_string(data.size()),
                  "sigma=" + format_precise(report.sigma) + (sigma ? " (user)" : " (median heuristic)"),
                  std::string("standardize=") + (standardize ? "true" : "false"),
                  "rank(>1e-10)=" + std::to_string(report.rank),
                  "expected_size=" + format_precise(report.expected_size)};
  t.columns = {"index", "eigenvalue", "inclusion_probability"};
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    const double lambda = report.eigenvalues(i);
    t.rows.push_back({std::to_string(i), format_precise(lambda), format_precise(lambda / (1.0 + lambda))});
  }
  return report;
}

}  // namespace dppkm::experiments
