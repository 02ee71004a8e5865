#include <doctest.h>

#include <algorithm>
#include <random>

#include "npsac/error.hpp"
#include "npsac/post_view.hpp"
#include "npsac/predict.hpp"
#include "support.hpp"

using namespace npsac;
using testing::id;

TEST_CASE("hash embedding basics") {
  const Eigen::VectorXd empty = hash_embed("", 8);
  CHECK(empty.size() == 8);
  CHECK(empty.isZero(0.0));
  CHECK(hash_embed("!!! ...", 8).isZero(0.0));

  CHECK(hash_embed("same text", 64) == hash_embed("same text", 64));
  CHECK(hash_embed("Same TEXT", 64) == hash_embed("same text", 64));
  CHECK(hash_embed("hello world", 64).norm() == doctest::Approx(1.0));
  CHECK(cosine(hash_embed("hello world", 64), hash_embed("goodbye moon", 64)) < 1.0);
}

TEST_CASE("tokenizer splits on non-alphanumerics") {
  CHECK(tokenize("Hello, WORLD-42!") == std::vector<std::string>{"hello", "world", "42"});
  CHECK(tokenize("caf\xC3\xA9 ok") == std::vector<std::string>{"caf\xC3\xA9", "ok"});
  CHECK(tokenize("").empty());
}

namespace {

VectorTable table_of(std::initializer_list<std::pair<const char*, std::vector<double>>> rows) {
  VectorTable t;
  t.dim = rows.begin()->second.size();
  for (const auto& [k, v] : rows) t.rows[k] = v;
  return t;
}

}  // namespace

TEST_CASE("mean pooling examples") {
  const std::vector<AccountId> order{id("a"), id("b"), id("c")};
  const VectorTable vectors = table_of({{"p1", {1, 0}}, {"p2", {0, 1}}, {"p3", {3, 4}}});
  const std::vector<Post> posts{{id("a"), "", "p1"}, {id("a"), "", "p2"}, {id("b"), "", "p3"}};
  const ViewMatrix v = account_post_view(posts, order, vectors);
  CHECK(v.order == order);
  CHECK(v.data.row(0) == Eigen::RowVector2d(0.5, 0.5));
  CHECK(v.data.row(1) == Eigen::RowVector2d(3, 4));
  CHECK(v.data.row(2).isZero(0.0));

  std::vector<Post> reversed(posts.rbegin(), posts.rend());
  CHECK(account_post_view(reversed, order, vectors).data == v.data);
}

TEST_CASE("missing post vector is reported") {
  const std::vector<AccountId> order{id("a")};
  const std::vector<Post> posts{{id("a"), "", "nope"}};
  try {
    account_post_view(posts, order, table_of({{"p1", {1.0}}}));
    FAIL("expected MissingVector");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingVector);
    CHECK(std::string(e.what()).find("nope") != std::string::npos);
  }
}

TEST_CASE("pooled rows equal the brute-force mean") {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-1, 1);
  VectorTable table;
  table.dim = 5;
  std::vector<AccountId> order;
  std::vector<Post> posts;
  for (int a = 0; a < 6; ++a) {
    order.push_back(id("acct" + std::to_string(a)));
    for (int p = 0; p < a; ++p) {
      const std::string pid = "p" + std::to_string(a) + "_" + std::to_string(p);
      std::vector<double> v(5);
      for (double& x : v) x = u(gen);
      table.rows[pid] = v;
      posts.push_back({order.back(), "", pid});
    }
  }
  std::shuffle(posts.begin(), posts.end(), gen);
  const ViewMatrix view = account_post_view(posts, order, table);
  for (int a = 0; a < 6; ++a) {
    std::vector<double> sum(5, 0.0);
    int count = 0;
    for (const auto& p : posts)
      if (p.author == order[a]) {
        for (int k = 0; k < 5; ++k) sum[k] += table.rows[p.post_id][k];
        ++count;
      }
    for (int k = 0; k < 5; ++k) CHECK(view.data(a, k) == doctest::Approx(count ? sum[k] / count : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("identical posts pool to themselves") {
  const std::vector<AccountId> order{id("a")};
  const std::vector<Post> posts{{id("a"), "same words here", "p1"}, {id("a"), "same words here", "p2"}};
  const ViewMatrix v = account_post_view(posts, order, HashEmbedder(32));
  CHECK((v.data.row(0).transpose() - hash_embed("same words here", 32)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(v.dim() == 32);
}
