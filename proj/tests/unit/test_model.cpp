#include <doctest.h>

#include <algorithm>
#include <random>

#include "npsac/error.hpp"
#include "npsac/model.hpp"
#include "support.hpp"

using namespace npsac;
using testing::account;
using testing::id;

TEST_CASE("canonical order sorts ids lexicographically") {
  const std::vector<Account> accounts{account("b"), account("a"), account("c")};
  CHECK(canonical_order(accounts) == std::vector<AccountId>{id("a"), id("b"), id("c")});

  const std::vector<Account> single{account("x")};
  CHECK(canonical_order(single) == std::vector<AccountId>{id("x")});
}

TEST_CASE("canonical order ignores presentation order") {
  std::vector<Account> accounts;
  for (int i = 0; i < 40; ++i) accounts.push_back(account("u" + std::to_string(i * 7919 % 101)));
  const auto reference = canonical_order(accounts);
  std::mt19937 gen(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(accounts.begin(), accounts.end(), gen);
    CHECK(canonical_order(accounts) == reference);
  }
  CHECK(std::is_sorted(reference.begin(), reference.end()));
  CHECK(reference.size() == accounts.size());
}

TEST_CASE("canonical order of nothing is an error") {
  std::vector<Account> none;
  try {
    canonical_order(none);
    FAIL("expected EmptyDataset");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyDataset);
  }
}

TEST_CASE("account ids are non-empty") {
  CHECK_THROWS_AS(AccountId(""), Error);
}

TEST_CASE("timestamps") {
  const UtcTime t = parse_rfc3339("2021-03-04T05:06:07Z");
  CHECK(format_rfc3339(t) == "2021-03-04T05:06:07Z");
  CHECK(parse_rfc3339("2021-03-04T07:06:07+02:00") == t);
  CHECK(parse_rfc3339("2021-03-04T05:06:07.999Z") == t);
  CHECK_THROWS_AS(parse_rfc3339("2021-13-04T05:06:07Z"), Error);
  CHECK_THROWS_AS(parse_rfc3339("yesterday"), Error);
}

TEST_CASE("order index") {
  const std::vector<AccountId> order{id("a"), id("c"), id("b")};
  const OrderIndex index(order);
  CHECK(index.at(id("c")) == 1);
  CHECK_FALSE(index.find(id("z")).has_value());
  CHECK_THROWS_AS(index.at(id("z")), Error);
}

TEST_CASE("views must share an order") {
  ViewMatrix a{"a", {id("x"), id("y")}, Eigen::MatrixXd::Zero(2, 1)};
  ViewMatrix b{"b", {id("y"), id("x")}, Eigen::MatrixXd::Zero(2, 3)};
  const std::vector<ViewMatrix> same{a, a};
  CHECK_NOTHROW(require_same_order(same));
  const std::vector<ViewMatrix> mixed{a, b};
  try {
    require_same_order(mixed);
    FAIL("expected OrderMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OrderMismatch);
  }
}

TEST_CASE("view validation rejects non-finite values") {
  ViewMatrix v{"v", {id("x")}, Eigen::MatrixXd::Zero(1, 2)};
  CHECK_NOTHROW(validate(v));
  v.data(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(v), Error);
}

TEST_CASE("unordered keys and enum spellings") {
  CHECK(unordered_key(id("b"), id("a")) == PairKey{id("a"), id("b")});
  CHECK(parse_verdict(to_string(Verdict::ClonePair)) == Verdict::ClonePair);
  CHECK(parse_verdict("benign") == Verdict::Benign);
  CHECK(parse_edge_kind("follower") == EdgeKind::Follower);
  CHECK_THROWS_AS(parse_edge_kind("enemy"), Error);
}
