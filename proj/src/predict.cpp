#include "npsac/predict.hpp"

#include <algorithm>
#include <cmath>

#include "npsac/error.hpp"

namespace npsac {

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::DimensionMismatch, "cosine of vectors with lengths " + std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()));
  if (a.empty()) throw Error(Errc::DimensionMismatch, "cosine of empty vectors");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return cosine(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

Verdict apply_threshold(double score, double threshold) noexcept {
  return score >= threshold ? Verdict::ClonePair : Verdict::Benign;
}

EmbeddingTable::EmbeddingTable(std::vector<AccountId> order, Eigen::MatrixXd rows)
    : order_(std::move(order)), rows_(std::move(rows)), index_(order_) {
  if (static_cast<std::size_t>(rows_.rows()) != order_.size())
    throw Error(Errc::OrderMismatch, "embedding rows differ from order length");
}

EmbeddingTable::EmbeddingTable(const FusedEmbedding& fused) : EmbeddingTable(fused.order, fused.G) {}

EmbeddingTable::EmbeddingTable(const ViewMatrix& view) : EmbeddingTable(view.order, view.data) {}

Eigen::VectorXd EmbeddingTable::row(const AccountId& id) const {
  return rows_.row(static_cast<Eigen::Index>(index_.at(id))).transpose();
}

double EmbeddingTable::score(const AccountId& a, const AccountId& b) const { return cosine(row(a), row(b)); }

CandidatePair classify_pair(const CandidatePair& pair, const EmbeddingTable& table, double threshold) {
  CandidatePair out = pair;
  out.score = table.score(pair.a, pair.b);
  out.verdict = apply_threshold(*out.score, threshold);
  return out;
}

CandidatePair classify_pair(const CandidatePair& pair, const FusedEmbedding& fused, double threshold) {
  return classify_pair(pair, EmbeddingTable(fused), threshold);
}

std::vector<CandidatePair> classify_pairs(std::span<const CandidatePair> pairs, const EmbeddingTable& table,
                                          double threshold) {
  std::vector<CandidatePair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(classify_pair(p, table, threshold));
  return out;
}

}  // namespace npsac
