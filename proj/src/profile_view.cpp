#include "npsac/profile_view.hpp"

#include <algorithm>

#include "npsac/error.hpp"
#include "npsac/text.hpp"

namespace npsac {

const std::array<const char*, kProfileAttributes>& profile_attribute_names() {
  static const std::array<const char*, kProfileAttributes> names = {
      "friend_count",         "follower_count",       "favorite_count",        "tweet_count",
      "list_count",           "account_age_months",   "profile_background_default", "profile_image_default",
      "has_description",      "has_url",              "screen_name_length",    "description_length"};
  return names;
}

long months_between(UtcTime from, UtcTime to) {
  using namespace std::chrono;
  if (to < from) throw Error(Errc::InvalidClock, "reference time precedes account creation");
  const auto from_day = floor<days>(from);
  const auto to_day = floor<days>(to);
  const year_month_day a{from_day};
  const year_month_day b{to_day};
  long months = (static_cast<int>(b.year()) - static_cast<int>(a.year())) * 12L +
                (static_cast<long>(static_cast<unsigned>(b.month())) - static_cast<long>(static_cast<unsigned>(a.month())));
  // The last month only counts once the day and time of day have been reached.
  const auto from_tod = from - from_day;
  const auto to_tod = to - to_day;
  if (b.day() < a.day() || (b.day() == a.day() && to_tod < from_tod)) --months;
  return std::max(months, 0L);
}

ProfileVector extract_attributes(const Account& account, UtcTime now) {
  ProfileVector v;
  auto& x = v.values;
  x[0] = static_cast<double>(account.friend_count);
  x[1] = static_cast<double>(account.follower_count);
  x[2] = static_cast<double>(account.favorite_count);
  x[3] = static_cast<double>(account.tweet_count);
  x[4] = static_cast<double>(account.list_count);
  x[5] = static_cast<double>(months_between(account.created_at, now));
  x[6] = account.default_profile_background ? 1.0 : 0.0;
  x[7] = account.default_profile_image ? 1.0 : 0.0;
  x[8] = account.description.empty() ? 0.0 : 1.0;
  x[9] = account.url_present ? 1.0 : 0.0;
  x[10] = static_cast<double>(utf8_length(account.screen_name));
  x[11] = static_cast<double>(utf8_length(account.description));
  return v;
}

ViewMatrix normalize_attributes(std::span<const ProfileVector> rows, std::span<const AccountId> order) {
  if (rows.empty()) throw Error(Errc::EmptyDataset, "no profile rows to normalize");
  if (rows.size() != order.size())
    throw Error(Errc::OrderMismatch, "profile rows and account order differ in length");
  ViewMatrix view;
  view.view_name = "profile";
  view.order.assign(order.begin(), order.end());
  view.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kProfileAttributes));
  for (std::size_t c = 0; c < kProfileAttributes; ++c) {
    double lo = rows[0].values[c];
    double hi = lo;
    for (const auto& r : rows) lo = std::min(lo, r.values[c]), hi = std::max(hi, r.values[c]);
    const double range = hi - lo;
    for (std::size_t r = 0; r < rows.size(); ++r)
      view.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          range > 0.0 ? (rows[r].values[c] - lo) / range : 0.0;
  }
  return view;
}

ViewMatrix profile_view(std::span<const Account> accounts, std::span<const AccountId> order, UtcTime now) {
  std::vector<const Account*> by_id;
  by_id.reserve(accounts.size());
  for (const auto& a : accounts) by_id.push_back(&a);
  std::sort(by_id.begin(), by_id.end(), [](const Account* x, const Account* y) { return x->id < y->id; });

  std::vector<ProfileVector> rows;
  rows.reserve(order.size());
  for (const auto& id : order) {
    auto it = std::lower_bound(by_id.begin(), by_id.end(), id, [](const Account* a, const AccountId& key) { return a->id < key; });
    if (it == by_id.end() || (*it)->id != id) throw Error(Errc::UnknownAccount, "no account '" + id.str() + "'");
    rows.push_back(extract_attributes(**it, now));
  }
  return normalize_attributes(rows, order);
}

}  // namespace npsac
