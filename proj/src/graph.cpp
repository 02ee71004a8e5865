#include "npsac/network_view.hpp"

#include <algorithm>

#include "npsac/error.hpp"

namespace npsac {

Graph Graph::from_edges(const EdgeSet& edges) {
  Graph g;
  for (const auto& [s, d] : edges.edges) {
    g.ids_.push_back(s);
    g.ids_.push_back(d);
  }
  std::sort(g.ids_.begin(), g.ids_.end());
  g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());

  std::vector<std::vector<std::uint32_t>> adj(g.ids_.size());
  for (const auto& [s, d] : edges.edges) {
    if (s == d) continue;
    const auto u = static_cast<std::uint32_t>(*g.index_of(s));
    const auto v = static_cast<std::uint32_t>(*g.index_of(d));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  g.offsets_.assign(1, 0);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.adjacency_.insert(g.adjacency_.end(), list.begin(), list.end());
    g.offsets_.push_back(g.adjacency_.size());
  }
  return g;
}

Graph build_graph(const EdgeSet& edges) { return Graph::from_edges(edges); }

std::size_t Graph::edge_count() const noexcept { return adjacency_.size() / 2; }

std::optional<std::size_t> Graph::index_of(const AccountId& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::span<const std::uint32_t> Graph::neighbors(std::size_t node) const {
  if (node >= ids_.size()) throw Error(Errc::ValidationError, "node index out of range");
  return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

bool Graph::adjacent(std::size_t u, std::size_t v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(v));
}

std::vector<double> transition_probs(const Graph& g, std::size_t prev, std::size_t cur, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw Error(Errc::InvalidConfig, "p and q must be positive");
  const auto nb = g.neighbors(cur);
  if (nb.empty()) throw Error(Errc::DeadEnd, "node '" + g.id(cur).str() + "' has no neighbors");
  if (!g.adjacent(prev, cur)) throw Error(Errc::ValidationError, "previous node is not adjacent to current node");

  std::vector<double> probs(nb.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const std::size_t x = nb[i];
    const double w = x == prev ? 1.0 / p : (g.adjacent(x, prev) ? 1.0 : 1.0 / q);
    probs[i] = w;
    total += w;
  }
  for (auto& w : probs) w /= total;
  return probs;
}

}  // namespace npsac
