#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "npsac/model.hpp"

namespace npsac {

/// Undirected simple graph over every endpoint id of an edge set.
/// Node indices follow sorted id order; neighbor lists are sorted.
class Graph {
 public:
  Graph() = default;
  static Graph from_edges(const EdgeSet& edges);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept;
  const AccountId& id(std::size_t node) const { return ids_.at(node); }
  const std::vector<AccountId>& ids() const noexcept { return ids_; }
  std::optional<std::size_t> index_of(const AccountId& id) const;
  std::span<const std::uint32_t> neighbors(std::size_t node) const;
  std::size_t degree(std::size_t node) const { return neighbors(node).size(); }
  bool adjacent(std::size_t u, std::size_t v) const;

 private:
  std::vector<AccountId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
};

Graph build_graph(const EdgeSet& edges);

/// Second-order transition distribution from `cur` given the walk arrived
/// from `prev`: weight 1/p to return, 1 to a common neighbor of prev, 1/q
/// otherwise. Entries align with g.neighbors(cur).
std::vector<double> transition_probs(const Graph& g, std::size_t prev, std::size_t cur, double p, double q);

struct WalkParams {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 15;  // nodes per walk, start included
  double p = 0.5;
  double q = 2.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct WalkCorpus {
  std::vector<AccountId> nodes;                 // index -> id, as in the graph
  std::vector<std::vector<std::uint32_t>> walks;
  WalkParams params;
};

/// Round-major: round r holds one walk per non-isolated node in index order.
/// Each walk has its own RNG stream, so the corpus does not depend on threads.
WalkCorpus generate_walks(const Graph& g, const WalkParams& params = {});

struct SkipGramParams {
  std::size_t dim = 128;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;
  /// 1 is the deterministic path. More threads train lock-free and
  /// are not reproducible.
  unsigned threads = 1;
};

struct NodeEmbeddings {
  std::size_t dim = 0;
  std::vector<AccountId> ids;  // sorted
  Eigen::MatrixXd vectors;     // one row per id
  std::vector<double> epoch_loss;

  /// Row for id, or nullopt when the node never appeared in a walk.
  std::optional<Eigen::VectorXd> find(const AccountId& id) const;
};

/// Negative-sampling loss for one (center, context) pair:
///   -log s(c . u_ctx) - sum_k log s(-c . u_k)
double sgns_loss(const Eigen::VectorXd& center, const Eigen::VectorXd& context,
                 std::span<const Eigen::VectorXd> negatives);

struct SgnsGradient {
  double loss = 0.0;
  Eigen::VectorXd center;
  Eigen::VectorXd context;
  std::vector<Eigen::VectorXd> negatives;
};

/// Analytic gradient of sgns_loss. Training uses the same kernel.
SgnsGradient sgns_gradient(const Eigen::VectorXd& center, const Eigen::VectorXd& context,
                           std::span<const Eigen::VectorXd> negatives);

NodeEmbeddings train_skipgram(const WalkCorpus& corpus, const SkipGramParams& params = {});

/// Rows in `order`; accounts without an embedding get zeros.
ViewMatrix network_view(const NodeEmbeddings& emb, std::span<const AccountId> order, std::string name = "network");

}  // namespace npsac
