#include "npsac/post_view.hpp"

#include "npsac/error.hpp"
#include "npsac/rng.hpp"

namespace npsac {

namespace {

constexpr std::uint64_t kHashSeed = 0x6E70736163686173ULL;

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

bool token_byte(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

template <typename RowFn>
ViewMatrix pool(std::span<const Post> posts, std::span<const AccountId> order, Eigen::Index dim, RowFn&& vector_of) {
  const OrderIndex index(order);
  ViewMatrix view;
  view.view_name = "posts";
  view.order.assign(order.begin(), order.end());
  view.data = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order.size()), dim);
  std::vector<std::size_t> counts(order.size(), 0);
  for (const auto& p : posts) {
    const auto row = index.find(p.author);
    if (!row) continue;
    view.data.row(static_cast<Eigen::Index>(*row)) += vector_of(p).transpose();
    ++counts[*row];
  }
  for (std::size_t r = 0; r < counts.size(); ++r)
    if (counts[r] > 0) view.data.row(static_cast<Eigen::Index>(r)) /= static_cast<double>(counts[r]);
  return view;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (token_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Eigen::VectorXd hash_embed(std::string_view text, std::size_t dim) {
  if (dim == 0) throw Error(Errc::InvalidConfig, "embedding dimension must be positive");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& token : tokenize(text)) {
    const std::uint64_t h = splitmix64(fnv1a(token) ^ kHashSeed);
    const auto bucket = static_cast<Eigen::Index>(h % dim);
    v[bucket] += (splitmix64(h) >> 63) ? 1.0 : -1.0;
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(Errc::InvalidConfig, "embedding dimension must be positive");
}

ViewMatrix account_post_view(std::span<const Post> posts, std::span<const AccountId> order, const Embedder& embedder) {
  return pool(posts, order, static_cast<Eigen::Index>(embedder.dim()),
              [&](const Post& p) { return embedder.embed(p.text); });
}

ViewMatrix account_post_view(std::span<const Post> posts, std::span<const AccountId> order, const VectorTable& vectors) {
  return pool(posts, order, static_cast<Eigen::Index>(vectors.dim), [&](const Post& p) {
    auto it = vectors.rows.find(p.post_id);
    if (it == vectors.rows.end()) throw Error(Errc::MissingVector, "no vector for post '" + p.post_id + "'");
    return Eigen::Map<const Eigen::VectorXd>(it->second.data(), static_cast<Eigen::Index>(it->second.size())).eval();
  });
}

}  // namespace npsac
