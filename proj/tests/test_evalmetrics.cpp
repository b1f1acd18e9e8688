#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dppkm/errors.hpp"
#include "dppkm/evalmetrics.hpp"
#include "dppkm/random.hpp"

using namespace dppkm;
using namespace dppkm::eval;

namespace {

using Pred = std::vector<std::size_t>;
using Gold = std::vector<int>;

// Hungarian oracle for tiny instances: best permutation by exhaustive search.
double exhaustive_hungarian(const Pred& pred, const Gold& gold) {
  const std::size_t nc = *std::max_element(pred.begin(), pred.end()) + 1;
  const auto ng = static_cast<std::size_t>(*std::max_element(gold.begin(), gold.end()) + 1);
  std::vector<std::size_t> slots(std::max(nc, ng));
  std::iota(slots.begin(), slots.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (std::size_t g = 0; g < ng; ++g) {
      const std::size_t c = slots[g];
      if (c >= nc) continue;
      double overlap = 0, csize = 0, gsize = 0;
      for (std::size_t i = 0; i < pred.size(); ++i) {
        overlap += (pred[i] == c && gold[i] == static_cast<int>(g)) ? 1 : 0;
        csize += pred[i] == c ? 1 : 0;
        gsize += gold[i] == static_cast<int>(g) ? 1 : 0;
      }
      if (overlap > 0) total += 2.0 * (overlap / csize) * (overlap / gsize) / (overlap / csize + overlap / gsize);
    }
    best = std::max(best, total / static_cast<double>(ng));
  } while (std::next_permutation(slots.begin(), slots.end()));
  return best;
}

}  // namespace

TEST_CASE("f1_macro examples") {
  CHECK(f1_macro(Pred{2, 2, 0, 0, 1}, Gold{5, 5, 7, 7, 9}) == doctest::Approx(1.0));
  CHECK(f1_macro(Pred{0, 0, 0, 0}, Gold{0, 0, 1, 1}) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(f1_macro(Pred{0, 1}, Gold{0}), InvalidInput);
  CHECK_THROWS_AS(f1_macro(Pred{}, Gold{}), InvalidInput);
}

TEST_CASE("f1_macro best-match allows many-to-one, Hungarian does not") {
  // two gold classes share their best cluster under best-match
  const Pred pred{0, 0, 0, 0, 1};
  const Gold gold{0, 0, 1, 1, 1};
  const double best = f1_macro(pred, gold, F1Matching::best_match);
  const double hung = f1_macro(pred, gold, F1Matching::hungarian);
  CHECK(best >= hung);
  CHECK(hung == doctest::Approx(exhaustive_hungarian(pred, gold)));
}

TEST_CASE("Hungarian matching agrees with exhaustive search") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 5 + uniform_index(15, rng);
    const std::size_t nc = 1 + uniform_index(4, rng);
    const std::size_t ng = 1 + uniform_index(4, rng);
    Pred pred(n);
    Gold gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = i < nc ? i : uniform_index(nc, rng);
      gold[i] = static_cast<int>(i < ng ? i : uniform_index(ng, rng));
    }
    CHECK(f1_macro(pred, gold, F1Matching::hungarian) == doctest::Approx(exhaustive_hungarian(pred, gold)));
  }
}

TEST_CASE("f1_macro is invariant to relabeling") {
  Rng rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniform_index(40, rng);
    const std::size_t nc = 1 + uniform_index(6, rng);
    const std::size_t ng = 1 + uniform_index(6, rng);
    Pred pred(n);
    Gold gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = uniform_index(nc, rng);
      gold[i] = static_cast<int>(uniform_index(ng, rng));
    }
    std::vector<std::size_t> pc(nc);
    std::vector<int> pg(ng);
    std::iota(pc.begin(), pc.end(), 0);
    std::iota(pg.begin(), pg.end(), 0);
    std::shuffle(pc.begin(), pc.end(), rng);
    std::shuffle(pg.begin(), pg.end(), rng);
    Pred pred2(n);
    Gold gold2(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred2[i] = pc[pred[i]] + 100;
      gold2[i] = pg[static_cast<std::size_t>(gold[i])] - 50;
    }
    for (auto m : {F1Matching::best_match, F1Matching::hungarian}) {
      const double a = f1_macro(pred, gold, m);
      CHECK(a == doctest::Approx(f1_macro(pred2, gold2, m)).epsilon(1e-12));
      CHECK(a >= 0.0);
      CHECK(a <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("missed_clusters") {
  Eigen::MatrixXd centers(3, 2);
  centers << 0, 0, 10, 0, 0, 10;
  CHECK(missed_clusters(centers, centers) == 0);
  Eigen::MatrixXd one(1, 2);
  one << 1, 1;
  CHECK(missed_clusters(one, centers) == 2);
  Eigen::MatrixXd twin(3, 2);
  twin << 0.5, 0, -0.5, 0, 9, 1;
  CHECK(missed_clusters(twin, centers) == 1);
  CHECK_THROWS_AS(missed_clusters(Eigen::MatrixXd(1, 3), centers), InvalidInput);
  CHECK_THROWS_AS(missed_clusters(Eigen::MatrixXd(0, 2), centers), InvalidInput);
}

TEST_CASE("missed_clusters is zero when every center is someone's nearest") {
  Rng rng(23);
  std::uniform_real_distribution<double> jitter(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int side = 2 + trial % 4;
    Eigen::MatrixXd centers(side * side, 2);
    for (int i = 0; i < side; ++i) {
      for (int j = 0; j < side; ++j) centers.row(i * side + j) << 10.0 * i, 10.0 * j;
    }
    Eigen::MatrixXd c = centers;
    for (Eigen::Index i = 0; i < c.rows(); ++i) c.row(i) += Eigen::RowVector2d(jitter(rng), jitter(rng));
    CHECK(missed_clusters(c, centers) == 0);
  }
}

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y2, yn;
  for (double v : x) {
    y2.push_back(2 * v);
    yn.push_back(-v);
  }
  CHECK(pearson(x, y2) == doctest::Approx(1.0));
  CHECK(pearson(x, yn) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 1, 1, 1, 1}), DegenerateDataError);
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), InvalidInput);

  const std::vector<double> gold{35, 57, 73, 23, 74, 77};
  const std::vector<double> mean_k{41.98, 47.72, 51.56, 41.24, 61.98, 71.42};
  CHECK(std::abs(pearson(gold, mean_k) - 0.84) <= 0.005);

  Rng rng(24);
  std::uniform_real_distribution<double> u(-5, 5), pos(0.1, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(10), b(10);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const double r = pearson(a, b);
    const double s = pos(rng), t = u(rng);
    std::vector<double> c = b;
    for (auto& v : c) v = s * v + t;
    CHECK(pearson(a, c) == doctest::Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("heuristic_k") {
  CHECK(heuristic_k(137, HeuristicK::log10) == doctest::Approx(2.1367).epsilon(1e-4));
  CHECK(heuristic_k(137, HeuristicK::sqrt) == doctest::Approx(11.7047).epsilon(1e-4));
  CHECK(heuristic_k(1, HeuristicK::log10) == 0.0);
  CHECK(heuristic_k(1, HeuristicK::sqrt) == 1.0);
  CHECK_THROWS_AS(heuristic_k(0, HeuristicK::sqrt), InvalidInput);
}

TEST_CASE("summarize and median") {
  const auto one = summarize(std::vector<double>{5}, "x");
  CHECK(one.mean == 5.0);
  CHECK(one.std == 0.0);
  CHECK(one.n_runs == 1);
  CHECK(one.metric_name == "x");
  const auto two = summarize(std::vector<double>{1, 3}, "x");
  CHECK(two.mean == doctest::Approx(2.0));
  CHECK(two.std == doctest::Approx(std::sqrt(2.0)));
  const auto flat = summarize(std::vector<double>{2, 2, 2}, "x");
  CHECK(flat.std == 0.0);
  CHECK_THROWS_AS(summarize(std::vector<double>{}, "x"), InvalidInput);

  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(median({}), InvalidInput);
}

TEST_CASE("heuristic_k and pearson reproduce the screenplay summary table") {
  // printed values are truncated, not rounded, to two decimals
  const auto trunc2 = [](double v) { return std::floor(v * 100.0 + 1e-9) / 100.0; };
  const std::vector<std::size_t> n{137, 148, 139, 140, 160, 209};
  const std::vector<double> gold{35, 57, 73, 23, 74, 77};
  const std::vector<double> printed_log{2.13, 2.17, 2.14, 2.14, 2.20, 2.32};
  const std::vector<double> printed_sqrt{11.7, 12.16, 11.78, 11.83, 12.64, 14.45};
  std::vector<double> nd, lg, sq;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double l = heuristic_k(n[i], HeuristicK::log10);
    const double s = heuristic_k(n[i], HeuristicK::sqrt);
    CHECK(trunc2(l) == doctest::Approx(printed_log[i]));
    CHECK(trunc2(s) == doctest::Approx(printed_sqrt[i]));
    nd.push_back(static_cast<double>(n[i]));
    lg.push_back(l);
    sq.push_back(s);
  }
  CHECK(trunc2(pearson(nd, gold)) == doctest::Approx(0.58));
  CHECK(trunc2(pearson(lg, gold)) == doctest::Approx(0.59));
  CHECK(trunc2(pearson(sq, gold)) == doctest::Approx(0.58));
}
