#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dppkm/errors.hpp"
#include "dppkm/kernels.hpp"
#include "dppkm/linalg.hpp"
#include "support.hpp"

using namespace dppkm;
using namespace dppkm::kernels;

namespace {

// Independent n-gram kernel: enumerate every contiguous n-gram of both token
// lists as joined strings and count the shared pairs.
double brute_ngram(const TokenList& s, const TokenList& t, int p) {
  double total = 0.0;
  for (int n = 1; n <= p; ++n) {
    const auto grams = [n](const TokenList& x) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= x.size(); ++i) {
        std::string g;
        for (int j = 0; j < n; ++j) g += x[i + static_cast<std::size_t>(j)] + "\x1f";
        out.push_back(g);
      }
      return out;
    };
    for (const auto& a : grams(s)) {
      for (const auto& b : grams(t)) total += (a == b) ? 1.0 : 0.0;
    }
  }
  return total;
}

double min_eigenvalue(const GramMatrix& g) { return linalg::sym_eig(g.base).values.minCoeff(); }

}  // namespace

TEST_CASE("rbf_gram direct evaluations") {
  const auto g = rbf_gram(testing::column({-1.0, 0.0, 1.0}), 1.0);
  CHECK(g.kind == KernelKind::rbf);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g(i, i) == 1.0);
  CHECK(g(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(g(1, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK(g(0, 2) == doctest::Approx(std::exp(-4.0)));

  Eigen::MatrixXd p(2, 2);
  p << 0, 0, 1, 1;  // squared distance 2
  CHECK(rbf_gram(p, 0.5)(0, 1) == doctest::Approx(0.367879).epsilon(1e-6));
}

TEST_CASE("rbf_gram rejects a bad bandwidth") {
  const auto p = testing::column({0.0, 1.0});
  CHECK_THROWS_AS(rbf_gram(p, 0.0), InvalidInput);
  CHECK_THROWS_AS(rbf_gram(p, -1.0), InvalidInput);
  CHECK_THROWS_AS(rbf_gram(p, std::nan("")), InvalidInput);
}

TEST_CASE("median_sigma") {
  CHECK(median_sigma(testing::column({0.0, 1.0})) == doctest::Approx(0.5));
  CHECK(median_sigma(testing::column({0.0, 1.0, 2.0})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(median_sigma(testing::column({3.0, 3.0, 3.0})), DegenerateDataError);

  Rng rng(8);
  const auto p = testing::random_points(15, 3, -2, 2, rng);
  const double c = 3.0;
  CHECK(median_sigma(Eigen::MatrixXd(c * p)) == doctest::Approx(median_sigma(p) / (c * c)));
}

TEST_CASE("word_ngram_gram worked example") {
  const TokenList s{"PELENNOR", "FIELDS", "MINAS", "TIRITH"};
  const TokenList t{"PELENNOR", "FIELDS"};
  CHECK(brute_ngram(s, t, 2) == 3.0);
  CHECK(brute_ngram(s, s, 2) == 7.0);
  CHECK(brute_ngram(t, t, 2) == 3.0);
  const auto g = word_ngram_gram({s, t}, 2);
  CHECK(g.kind == KernelKind::word_ngram);
  CHECK(g(0, 1) == doctest::Approx(3.0 / std::sqrt(21.0)).epsilon(1e-14));
  CHECK(g(0, 1) == doctest::Approx(0.6547).epsilon(1e-4));
}

TEST_CASE("word_ngram_gram trivial cases") {
  const TokenList a{"KITCHEN"};
  const TokenList b{"HARBOR", "DOCKS"};
  const auto g = word_ngram_gram({a, a, b}, 2);
  CHECK(g(0, 1) == doctest::Approx(1.0));
  CHECK(g(0, 2) == 0.0);
  CHECK(g(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("word_ngram_gram matches brute-force enumeration on random texts") {
  Rng rng(31);
  const std::vector<std::string> vocab{"A", "B", "C", "D", "E"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TokenList> texts(6);
    for (auto& t : texts) {
      const std::size_t len = 1 + uniform_index(6, rng);
      for (std::size_t i = 0; i < len; ++i) t.push_back(vocab[uniform_index(vocab.size(), rng)]);
    }
    const int p = 1 + trial % 3;
    const auto g = word_ngram_gram(texts, p);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      for (std::size_t j = 0; j < texts.size(); ++j) {
        const double expect = brute_ngram(texts[i], texts[j], p) /
                              std::sqrt(brute_ngram(texts[i], texts[i], p) * brute_ngram(texts[j], texts[j], p));
        CHECK(g(i, j) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
    CHECK(min_eigenvalue(g) >= -1e-8);
  }
}

TEST_CASE("word_ngram_gram rejects empty records by position") {
  try {
    word_ngram_gram({{"A"}, {}}, 2);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
  }
  CHECK_THROWS_AS(word_ngram_gram({{"A"}}, 0), InvalidInput);
}

TEST_CASE("word_ngram_gram is invariant to text order") {
  const std::vector<TokenList> texts{{"A", "B"}, {"B", "C", "A"}, {"C"}, {"A", "B", "C"}};
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  std::vector<TokenList> shuffled;
  for (auto i : perm) shuffled.push_back(texts[i]);
  const auto g = word_ngram_gram(texts, 2);
  const auto h = word_ngram_gram(shuffled, 2);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) CHECK(h(i, j) == g(perm[i], perm[j]));
  }
}

TEST_CASE("kernel_sq_distance") {
  const auto g = rbf_gram(testing::column({0.0, 1.0}), 1.0);
  CHECK(kernel_sq_distance(g, 0, 0) == 0.0);
  CHECK(kernel_sq_distance(g, 0, 1) == doctest::Approx(2.0 - 2.0 * std::exp(-1.0)));
  CHECK(kernel_sq_distance(g, 0, 1) == doctest::Approx(1.26424).epsilon(1e-5));
  const auto w = word_ngram_gram({{"A"}, {"B"}}, 1);
  CHECK(kernel_sq_distance(w, 0, 1) == doctest::Approx(2.0));
}

TEST_CASE("RBF Gram properties on random data") {
  Rng rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial);
    const auto p = testing::random_points(n, 2, -3, 3, rng);
    const double sigma = 0.1 + 0.1 * trial;
    const auto g = rbf_gram(p, sigma);
    CHECK(min_eigenvalue(g) >= -1e-8);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(g(i, i) - 1.0) <= 1e-12);
      CHECK(kernel_sq_distance(g, i, i) == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(kernel_sq_distance(g, i, j) == kernel_sq_distance(g, j, i));
        const double expect = 2.0 - 2.0 * std::exp(-sigma * sq_distance(p, i, j));
        CHECK(std::abs(kernel_sq_distance(g, i, j) - expect) <= 1e-12);
      }
    }
  }
}
