#include <doctest.h>

#include <cmath>
#include <random>

#include "npsac/error.hpp"
#include "npsac/predict.hpp"
#include "support.hpp"

using namespace npsac;
using testing::id;

TEST_CASE("cosine examples") {
  const std::vector<double> v{0.3, -2.0, 5.0};
  CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine(std::vector<double>{1, 1}, std::vector<double>{1, 0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
  CHECK_THROWS_AS(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}), Error);
}

TEST_CASE("cosine properties") {
  std::mt19937 gen(8);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd a(7), b(7);
    for (int i = 0; i < 7; ++i) a(i) = normal(gen), b(i) = normal(gen);
    const double alpha = std::exp(normal(gen) * 3);
    const double c = cosine(a, b);
    CHECK(std::abs(cosine(Eigen::VectorXd(alpha * a), b) - c) <= 1e-12);
    CHECK(cosine(b, a) == doctest::Approx(c).epsilon(1e-14));
    CHECK(std::abs(c) <= 1.0 + 1e-12);
  }
}

TEST_CASE("threshold rule is inclusive") {
  CHECK(apply_threshold(0.1, 0.1) == Verdict::ClonePair);
  CHECK(apply_threshold(0.05, 0.1) == Verdict::Benign);
  CHECK(apply_threshold(1.0, 0.1) == Verdict::ClonePair);
}

namespace {

FusedEmbedding fused_of(const std::vector<AccountId>& order, Eigen::MatrixXd g) {
  FusedEmbedding f;
  f.order = order;
  f.k = g.cols();
  f.G = std::move(g);
  return f;
}

}  // namespace

TEST_CASE("classify_pair examples") {
  const std::vector<AccountId> order{id("a"), id("b"), id("c")};
  Eigen::MatrixXd g(3, 2);
  g << 1, 0, 1, 0, 0, 1;
  const FusedEmbedding f = fused_of(order, g);
  const CandidatePair same = classify_pair({id("a"), id("b"), 0.9, {}, {}}, f);
  CHECK(*same.score == doctest::Approx(1.0));
  CHECK(*same.verdict == Verdict::ClonePair);
  const CandidatePair orth = classify_pair({id("a"), id("c"), 0.9, {}, {}}, f);
  CHECK(*orth.verdict == Verdict::Benign);
  CHECK_THROWS_AS(classify_pair({id("a"), id("z"), 0.9, {}, {}}, f), Error);
}

TEST_CASE("raising the threshold shrinks the positive set") {
  std::mt19937 gen(2);
  std::normal_distribution<double> normal;
  std::vector<AccountId> order;
  for (int i = 0; i < 30; ++i) order.push_back(id("a" + std::to_string(100 + i)));
  Eigen::MatrixXd g(30, 4);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(gen);
  const EmbeddingTable table(order, g);
  std::vector<CandidatePair> pairs;
  for (int i = 0; i < 30; ++i)
    for (int j = i + 1; j < 30; ++j) pairs.push_back({order[i], order[j], 1.0, {}, {}});
  std::vector<bool> previous(pairs.size(), true);
  for (double t = -1.0; t <= 1.0; t += 0.1) {
    const auto out = classify_pairs(pairs, table, t);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const bool positive = *out[k].verdict == Verdict::ClonePair;
      CHECK((!positive || previous[k]));
      previous[k] = positive;
    }
  }
}
