#include "npsac/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "npsac/error.hpp"
#include "npsac/text.hpp"

namespace npsac {

double bps_score(double a_sim, double b_common, const BpsParams& params) {
  if (!(params.k > 0.0) || !(params.x > 0.0)) throw Error(Errc::InvalidConfig, "BPS k and x must be positive");
  return (a_sim * a_sim + b_common * b_common) / std::sqrt(params.k * params.k + params.x * params.x);
}

double bps_attribute_similarity(const Account& x, const Account& y) {
  int matches = 0;
  auto text_eq = [](const std::string& s, const std::string& t) { return fold_case(s) == fold_case(t); };
  matches += text_eq(x.screen_name, y.screen_name);
  matches += text_eq(x.username, y.username);
  matches += text_eq(x.description, y.description);
  matches += text_eq(x.location, y.location);
  matches += x.url_present == y.url_present;
  matches += x.default_profile_image == y.default_profile_image;
  matches += x.default_profile_background == y.default_profile_background;
  matches += x.created_at == y.created_at;
  matches += x.friend_count == y.friend_count;
  matches += x.follower_count == y.follower_count;
  matches += x.favorite_count == y.favorite_count;
  matches += x.tweet_count == y.tweet_count;
  matches += x.list_count == y.list_count;
  return static_cast<double>(matches) / 13.0;
}

double bps_common_friends(const Graph& friends, const AccountId& x, const AccountId& y) {
  const auto u = friends.index_of(x);
  const auto v = friends.index_of(y);
  if (!u || !v) return 0.0;
  const auto nu = friends.neighbors(*u);
  const auto nv = friends.neighbors(*v);
  const std::size_t max_degree = std::max(nu.size(), nv.size());
  if (max_degree == 0) return 0.0;
  std::vector<std::uint32_t> common;
  std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(max_degree);
}

namespace {

const Account& find_account(std::span<const Account> accounts, const AccountId& id) {
  auto it = std::find_if(accounts.begin(), accounts.end(), [&](const Account& a) { return a.id == id; });
  if (it == accounts.end()) throw Error(Errc::UnknownAccount, "unknown account '" + id.str() + "'");
  return *it;
}

}  // namespace

BpsResult bps_classify(const CandidatePair& pair, std::span<const Account> accounts, const Graph& friends,
                       const BpsParams& params) {
  const Account& x = find_account(accounts, pair.a);
  const Account& y = find_account(accounts, pair.b);
  BpsResult r;
  r.attribute_similarity = bps_attribute_similarity(x, y);
  r.common_friends = bps_common_friends(friends, pair.a, pair.b);
  r.score = bps_score(r.attribute_similarity, r.common_friends, params);
  r.verdict = r.score < params.mu ? Verdict::Benign : Verdict::ClonePair;
  return r;
}

std::vector<CandidatePair> bps_classify_pairs(std::span<const CandidatePair> pairs, std::span<const Account> accounts,
                                              const Graph& friends, const BpsParams& params) {
  std::vector<CandidatePair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const BpsResult r = bps_classify(p, accounts, friends, params);
    CandidatePair scored = p;
    scored.score = r.score;
    scored.verdict = r.verdict;
    out.push_back(std::move(scored));
  }
  return out;
}

ViewMatrix concat_fuse(std::span<const ViewMatrix> views) {
  if (views.empty()) throw Error(Errc::InvalidConfig, "no views to concatenate");
  require_same_order(views);
  Eigen::Index total = 0;
  for (const auto& v : views) total += v.data.cols();
  ViewMatrix out;
  out.view_name = "concat";
  out.order = views.front().order;
  out.data.resize(views.front().data.rows(), total);
  Eigen::Index col = 0;
  for (const auto& v : views) {
    out.data.middleCols(col, v.data.cols()) = v.data;
    col += v.data.cols();
  }
  return out;
}

}  // namespace npsac
