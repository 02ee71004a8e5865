#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "npsac/model.hpp"

namespace npsac {

/// a.b / (|a||b|); 0 when either vector is zero. DimensionMismatch on length mismatch.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// clone_pair iff score >= threshold.
Verdict apply_threshold(double score, double threshold) noexcept;

/// Row lookup over any per-account matrix (fused G or a single view).
class EmbeddingTable {
 public:
  EmbeddingTable(std::vector<AccountId> order, Eigen::MatrixXd rows);
  explicit EmbeddingTable(const FusedEmbedding& fused);
  explicit EmbeddingTable(const ViewMatrix& view);

  /// UnknownAccount if absent.
  Eigen::VectorXd row(const AccountId& id) const;
  double score(const AccountId& a, const AccountId& b) const;

 private:
  std::vector<AccountId> order_;
  Eigen::MatrixXd rows_;
  OrderIndex index_;
};

CandidatePair classify_pair(const CandidatePair& pair, const EmbeddingTable& table, double threshold = 0.1);
CandidatePair classify_pair(const CandidatePair& pair, const FusedEmbedding& fused, double threshold = 0.1);

std::vector<CandidatePair> classify_pairs(std::span<const CandidatePair> pairs, const EmbeddingTable& table,
                                          double threshold = 0.1);

}  // namespace npsac
