#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace npsac {

/// Opaque platform user id. Non-empty; ordering is lexicographic on bytes.
class AccountId {
 public:
  AccountId() = default;
  explicit AccountId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const AccountId&, const AccountId&) = default;

 private:
  std::string value_;
};

using UtcTime = std::chrono::sys_seconds;

/// Parses an RFC 3339 timestamp ("2020-01-15T08:30:00Z", offsets and
/// fractional seconds accepted; fractions are truncated).
UtcTime parse_rfc3339(std::string_view text);
std::string format_rfc3339(UtcTime t);

struct Account {
  AccountId id;
  std::string screen_name;
  std::string username;
  std::string description;
  std::string location;
  bool url_present = false;
  bool default_profile_image = false;
  bool default_profile_background = false;
  UtcTime created_at{};
  std::int64_t friend_count = 0;
  std::int64_t follower_count = 0;
  std::int64_t favorite_count = 0;
  std::int64_t tweet_count = 0;
  std::int64_t list_count = 0;

  friend bool operator==(const Account&, const Account&) = default;
};

struct Post {
  AccountId author;
  std::string text;
  std::string post_id;

  friend bool operator==(const Post&, const Post&) = default;
};

enum class EdgeKind { Follower, Friend };

const char* to_string(EdgeKind kind) noexcept;
EdgeKind parse_edge_kind(std::string_view text);

struct EdgeSet {
  EdgeKind kind = EdgeKind::Follower;
  /// Sorted, deduplicated, no self-loops.
  std::vector<std::pair<AccountId, AccountId>> edges;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
};

/// One view X_i: rows follow `order`, which is shared by every view in a run.
struct ViewMatrix {
  std::string view_name;
  std::vector<AccountId> order;
  Eigen::MatrixXd data;

  Eigen::Index dim() const noexcept { return data.cols(); }
};

/// Throws ValidationError unless rows == |order| and every entry is finite.
void validate(const ViewMatrix& view);

/// Throws OrderMismatch unless every view carries the same order and row count.
void require_same_order(std::span<const ViewMatrix> views);

struct FusedEmbedding {
  std::vector<AccountId> order;
  Eigen::MatrixXd G;                 // n x k, orthonormal columns
  std::vector<Eigen::MatrixXd> U;    // d_i x k per view
  std::vector<double> weights;
  std::vector<double> ridges;        // ridge actually applied to each view
  Eigen::VectorXd eigenvalues;       // top-k, descending
  Eigen::Index k = 0;
};

enum class Verdict { ClonePair, Benign };

const char* to_string(Verdict v) noexcept;
Verdict parse_verdict(std::string_view text);

struct CandidatePair {
  AccountId a;
  AccountId b;
  double name_similarity = 0.0;
  std::optional<double> score;
  std::optional<Verdict> verdict;
};

/// Unordered account pair, stored with a < b.
using PairKey = std::pair<AccountId, AccountId>;
PairKey unordered_key(const AccountId& x, const AccountId& y);

/// Ground-truth clone pairs.
using LabelSet = std::set<PairKey>;

/// Lexicographic order of the ids; throws EmptyDataset on empty input.
std::vector<AccountId> canonical_order(std::span<const Account> accounts);

/// Maps an id to its row in a fixed order. Built once, queried many times.
class OrderIndex {
 public:
  explicit OrderIndex(std::span<const AccountId> order);

  std::optional<std::size_t> find(const AccountId& id) const;
  /// Throws UnknownAccount when the id is absent.
  std::size_t at(const AccountId& id) const;
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<std::pair<AccountId, std::size_t>> sorted_;
};

}  // namespace npsac

template <>
struct std::hash<npsac::AccountId> {
  std::size_t operator()(const npsac::AccountId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
