#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dppkm/datasets.hpp"
#include "dppkm/errors.hpp"
#include "dppkm/experiments.hpp"
#include "support.hpp"

using namespace dppkm;
using namespace dppkm::experiments;

namespace {

const std::string kData = DPPKM_DATA_DIR;

ScreenplayInput fixture(const std::string& stem, bool with_gold = true) {
  ScreenplayInput in;
  in.name = stem;
  in.scenes = datasets::parse_screenplay(datasets::read_file(kData + "/screenplays/" + stem + ".txt"));
  if (with_gold) in.gold = datasets::load_gold_sidecar(kData + "/screenplays/" + stem + ".gold", in.scenes.size());
  return in;
}

datasets::LabeledDataset small_vectors(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  datasets::LabeledDataset d;
  d.name = "small";
  d.points = testing::random_points(n, 2, 0.0, 10.0, rng);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
  d.gold_labels = labels;
  return d;
}

}  // namespace

TEST_CASE("format_real and ResultTable") {
  CHECK(format_real(1.0) == "1.000000");
  CHECK(format_real(-1e-9) == "0.000000");
  CHECK(format_real(2.1367205) == "2.136721");
  ResultTable t;
  t.provenance = {"a=1"};
  t.columns = {"x", "y"};
  t.rows = {{"1", "2"}};
  CHECK(t.to_tsv() == "# a=1\nx\ty\n1\t2\n");
  CHECK(t.column("y") == 1);
  CHECK_THROWS_AS(t.column("z"), InvalidInput);
}

TEST_CASE("grid_sigma") {
  CHECK(grid_sigma(10.0) == doctest::Approx(0.005));
  CHECK_THROWS_AS(grid_sigma(0.0), InvalidInput);
}

TEST_CASE("synthetic family is deterministic regardless of worker count") {
  SyntheticConfig cfg;
  cfg.grid_sides = {2, 3};
  cfg.points_per = 30;
  cfg.run.runs = 6;
  cfg.run.master_seed = 7;
  const auto a = run_synthetic(cfg);
  const auto b = run_synthetic(cfg);
  cfg.run.jobs = 3;
  const auto c = run_synthetic(cfg);
  CHECK(a.table.to_tsv() == b.table.to_tsv());
  CHECK(a.table.to_tsv() == c.table.to_tsv());
  for (const auto& g : a.grids) {
    CHECK(g.missed.at(SeedMethod::dpp).size() == 6);
    CHECK(g.inferred_k_summary.has_value());
  }
  CHECK(a.table.provenance.front().rfind("dppkm", 0) == 0);
}

TEST_CASE("synthetic family on a single Gaussian misses nothing") {
  SyntheticConfig cfg;
  cfg.grid_sides = {1};
  cfg.points_per = 40;
  cfg.methods = {SeedMethod::rand, SeedMethod::pp, SeedMethod::dppk, SeedMethod::sequential};
  cfg.run.runs = 5;
  const auto r = run_synthetic(cfg);
  for (auto m : cfg.methods) CHECK(r.grids[0].median_missed.at(m) == 0.0);
  CHECK(!r.k_correlation);
}

TEST_CASE("synthetic family on the 2x2 grid") {
  SyntheticConfig cfg;
  cfg.grid_sides = {2};
  cfg.run.runs = 20;
  cfg.run.master_seed = 3;
  const auto r = run_synthetic(cfg);
  CHECK(r.grids[0].median_missed.at(SeedMethod::dpp) == 0.0);
  CHECK(r.grids[0].k_true == 4);
  CHECK(r.grids[0].n == 400);
}

TEST_CASE("benchmark family") {
  const auto iris = datasets::load_delimited(kData + "/iris.csv", {4, ','});
  BenchmarkConfig cfg;
  cfg.run.runs = 10;
  const auto r = run_benchmark(cfg, iris);
  CHECK(r.k_true == 3);
  CHECK(r.method(SeedMethod::pp).f1_summary.has_value());
  CHECK(r.method(SeedMethod::dppk).f1_summary.has_value());
  CHECK(!r.method(SeedMethod::dpp).f1_summary.has_value());
  CHECK(r.method(SeedMethod::dppk).k_summary->mean == 3.0);
  CHECK(r.sigma == doctest::Approx(kernels::median_sigma(iris.points)));
  CHECK_THROWS_AS(r.method(SeedMethod::rand), InvalidInput);
  const auto& row = r.table.rows[1];
  CHECK(row[r.table.column("method")] == "dpp");
  CHECK(row[r.table.column("f1_mean")] == "NA");
}

TEST_CASE("benchmark family with k = n has zero cost") {
  const auto d = small_vectors(8, 11);
  BenchmarkConfig cfg;
  cfg.k = 8;
  cfg.methods = {SeedMethod::dppk, SeedMethod::pp};
  cfg.run.runs = 3;
  const auto r = run_benchmark(cfg, d);
  CHECK(r.method(SeedMethod::dppk).cost_summary->mean == doctest::Approx(0.0));
  CHECK(r.method(SeedMethod::pp).cost_summary->mean == doctest::Approx(0.0));
}

TEST_CASE("benchmark family input validation") {
  auto d = small_vectors(8, 12);
  BenchmarkConfig cfg;
  cfg.run.runs = 2;
  cfg.k = 9;
  CHECK_THROWS_AS(run_benchmark(cfg, d), InvalidInput);
  cfg.k.reset();
  d.gold_labels.reset();
  CHECK_THROWS_AS(run_benchmark(cfg, d), InvalidInput);
  cfg.methods = {SeedMethod::dpp};
  CHECK_NOTHROW(run_benchmark(cfg, d));
  cfg.methods.clear();
  CHECK_THROWS_AS(run_benchmark(cfg, d), InvalidInput);
}

TEST_CASE("screenplay family on the fixtures") {
  ScreenplayConfig cfg;
  cfg.run.runs = 20;
  const auto r = run_screenplay(cfg, {fixture("two_locations"), fixture("identical_headings")});
  REQUIRE(r.screenplays.size() == 2);
  const auto& two = r.screenplays[0];
  CHECK(*two.gold_k == 2);
  CHECK(two.f1.at(SeedMethod::dppk).mean == doctest::Approx(1.0));
  CHECK(std::abs(two.inferred_k_summary.mean - 2.0) <= 0.5);
  const auto& same = r.screenplays[1];
  CHECK(*same.gold_k == 1);
  CHECK(same.f1.at(SeedMethod::dppk).mean == doctest::Approx(1.0));
  CHECK(same.inferred_k_summary.mean == 1.0);
  CHECK(r.correlation_with_gold.count("dpp_k_mean") == 1);
  CHECK(r.table.rows.back()[0] == "correlation_with_gold_k");
}

TEST_CASE("screenplay family without gold reports k only") {
  ScreenplayConfig cfg;
  cfg.run.runs = 5;
  const auto r = run_screenplay(cfg, {fixture("long_script", false)});
  const auto& o = r.screenplays[0];
  CHECK(o.n == 137);
  CHECK(o.log_k == doctest::Approx(std::log10(137.0)));
  CHECK(o.f1.empty());
  REQUIRE(r.notices.size() == 1);
  CHECK(r.notices[0].find("no gold") != std::string::npos);
  CHECK(r.table.rows[0][r.table.column("f1_mean_dppk")] == "NA");
  CHECK(r.correlation_with_gold.empty());
}

TEST_CASE("screenplay family rejects near-empty screenplays") {
  ScreenplayInput in;
  in.name = "tiny";
  in.scenes = datasets::parse_screenplay("INT. A - DAY\n");
  CHECK_THROWS_AS(run_screenplay({}, {in}), InvalidInput);
  CHECK_THROWS_AS(run_screenplay({}, {}), InvalidInput);
}

TEST_CASE("verify family") {
  const auto r = run_verify({});
  CHECK(r.grid.size() == 1000);
  CHECK(r.table.rows.size() == 1000);
  CHECK(r.witnesses >= 1);
  CHECK(r.chain_violations == 0);
  CHECK(r.bound == doctest::Approx(std::sqrt(std::log(6.0) / 4.0)));
  CHECK_THROWS_AS(run_verify({0.5, 1.0, 1000}), PreconditionError);
}

TEST_CASE("dpp-diag family") {
  const auto d = small_vectors(12, 13);
  const auto r = run_dpp_diag(d, 0.2);
  CHECK(r.sigma == 0.2);
  CHECK(r.eigenvalues.size() == 12);
  CHECK(r.table.rows.size() == 12);
  double expected = 0.0;
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) expected += r.eigenvalues(i) / (1 + r.eigenvalues(i));
  CHECK(r.expected_size == doctest::Approx(expected));
  CHECK(r.eigenvalues.sum() == doctest::Approx(12.0));
}
