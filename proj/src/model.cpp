#include "npsac/model.hpp"

#include <algorithm>
#include <cmath>

#include "npsac/error.hpp"
#include "npsac/text.hpp"

namespace npsac {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::ValidationError: return "ValidationError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MissingVector: return "MissingVector";
    case Errc::DeadEnd: return "DeadEnd";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::RankError: return "RankError";
    case Errc::UnknownAccount: return "UnknownAccount";
    case Errc::InvalidClock: return "InvalidClock";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::MissingVerdict: return "MissingVerdict";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

AccountId::AccountId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw Error(Errc::ValidationError, "account id must be non-empty");
}

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t count) {
  if (pos + count > s.size()) throw Error(Errc::ParseError, "truncated timestamp '" + std::string(s) + "'");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') throw Error(Errc::ParseError, "bad timestamp '" + std::string(s) + "'");
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

void expect(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size() || s[pos] != c) throw Error(Errc::ParseError, "bad timestamp '" + std::string(s) + "'");
}

}  // namespace

UtcTime parse_rfc3339(std::string_view s) {
  using namespace std::chrono;
  const int y = digits(s, 0, 4);
  expect(s, 4, '-');
  const int mo = digits(s, 5, 2);
  expect(s, 7, '-');
  const int d = digits(s, 8, 2);
  if (s.size() < 11 || (s[10] != 'T' && s[10] != 't' && s[10] != ' '))
    throw Error(Errc::ParseError, "bad timestamp '" + std::string(s) + "'");
  const int hh = digits(s, 11, 2);
  expect(s, 13, ':');
  const int mm = digits(s, 14, 2);
  expect(s, 16, ':');
  const int ss = digits(s, 17, 2);
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw Error(Errc::ParseError, "bad timestamp '" + std::string(s) + "'");
  }
  int offset_minutes = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    const int sign = s[pos] == '+' ? 1 : -1;
    const int oh = digits(s, pos + 1, 2);
    expect(s, pos + 3, ':');
    const int om = digits(s, pos + 4, 2);
    offset_minutes = sign * (oh * 60 + om);
    pos += 6;
  } else {
    throw Error(Errc::ParseError, "timestamp without zone '" + std::string(s) + "'");
  }
  if (pos != s.size()) throw Error(Errc::ParseError, "trailing text in timestamp '" + std::string(s) + "'");

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
    throw Error(Errc::ParseError, "out-of-range timestamp '" + std::string(s) + "'");
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} - minutes{offset_minutes};
}

std::string format_rfc3339(UtcTime t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

const char* to_string(EdgeKind kind) noexcept {
  return kind == EdgeKind::Follower ? "follower" : "friend";
}

EdgeKind parse_edge_kind(std::string_view text) {
  if (text == "follower") return EdgeKind::Follower;
  if (text == "friend") return EdgeKind::Friend;
  throw Error(Errc::InvalidConfig, "edge kind must be follower or friend, got '" + std::string(text) + "'");
}

const char* to_string(Verdict v) noexcept {
  return v == Verdict::ClonePair ? "clone_pair" : "benign";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "clone_pair") return Verdict::ClonePair;
  if (text == "benign") return Verdict::Benign;
  throw Error(Errc::ParseError, "unknown verdict '" + std::string(text) + "'");
}

void validate(const ViewMatrix& view) {
  if (static_cast<std::size_t>(view.data.rows()) != view.order.size())
    throw Error(Errc::ValidationError, "view '" + view.view_name + "' has " + std::to_string(view.data.rows()) +
                                           " rows for " + std::to_string(view.order.size()) + " accounts");
  if (!view.data.allFinite())
    throw Error(Errc::ValidationError, "view '" + view.view_name + "' has non-finite entries");
}

void require_same_order(std::span<const ViewMatrix> views) {
  for (const auto& v : views) {
    if (static_cast<std::size_t>(v.data.rows()) != v.order.size())
      throw Error(Errc::OrderMismatch, "view '" + v.view_name + "' row count differs from its order");
    if (v.order != views.front().order)
      throw Error(Errc::OrderMismatch, "view '" + v.view_name + "' does not share the account order of '" +
                                           views.front().view_name + "'");
  }
}

PairKey unordered_key(const AccountId& x, const AccountId& y) {
  return x < y ? PairKey{x, y} : PairKey{y, x};
}

std::vector<AccountId> canonical_order(std::span<const Account> accounts) {
  if (accounts.empty()) throw Error(Errc::EmptyDataset, "no accounts");
  std::vector<AccountId> ids;
  ids.reserve(accounts.size());
  for (const auto& a : accounts) ids.push_back(a.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

OrderIndex::OrderIndex(std::span<const AccountId> order) {
  sorted_.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted_.emplace_back(order[i], i);
  std::sort(sorted_.begin(), sorted_.end());
}

std::optional<std::size_t> OrderIndex::find(const AccountId& id) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), id,
                             [](const auto& entry, const AccountId& key) { return entry.first < key; });
  if (it == sorted_.end() || it->first != id) return std::nullopt;
  return it->second;
}

std::size_t OrderIndex::at(const AccountId& id) const {
  if (auto row = find(id)) return *row;
  throw Error(Errc::UnknownAccount, "unknown account '" + id.str() + "'");
}

}  // namespace npsac
