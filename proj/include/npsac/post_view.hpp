#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "npsac/ingest.hpp"
#include "npsac/model.hpp"

namespace npsac {

/// Maps post text to a fixed-length vector. Implementations must be pure.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  virtual Eigen::VectorXd embed(std::string_view text) const = 0;
};

/// Signed feature hashing of lowercased alphanumeric tokens, L2-normalized.
/// Text without tokens maps to the zero vector.
Eigen::VectorXd hash_embed(std::string_view text, std::size_t dim);

class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dim = 256);
  std::size_t dim() const override { return dim_; }
  Eigen::VectorXd embed(std::string_view text) const override { return hash_embed(text, dim_); }

 private:
  std::size_t dim_;
};

/// Lowercased tokens split on every byte that is not an ASCII letter or
/// digit. Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Mean of the per-post vectors of each account; accounts without posts get
/// a zero row.
ViewMatrix account_post_view(std::span<const Post> posts, std::span<const AccountId> order, const Embedder& embedder);

/// Same, with per-post vectors looked up by post_id (MissingVector if absent).
ViewMatrix account_post_view(std::span<const Post> posts, std::span<const AccountId> order, const VectorTable& vectors);

}  // namespace npsac
