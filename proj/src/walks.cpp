#include "npsac/network_view.hpp"

#include <algorithm>
#include <thread>

#include "npsac/error.hpp"
#include "npsac/rng.hpp"

namespace npsac {

namespace {

// Cumulative-sum inversion over unnormalized weights.
std::size_t sample_index(std::span<const double> weights, double total, Rng& rng) {
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

void walk_from(const Graph& g, std::uint32_t start, const WalkParams& params, Rng& rng,
               std::vector<double>& scratch, std::vector<std::uint32_t>& walk) {
  walk.clear();
  walk.push_back(start);
  if (params.walk_length < 2) return;
  {
    const auto nb = g.neighbors(start);
    walk.push_back(nb[rng.index(nb.size())]);
  }
  const double inv_p = 1.0 / params.p;
  const double inv_q = 1.0 / params.q;
  while (walk.size() < params.walk_length) {
    const std::uint32_t cur = walk.back();
    const std::uint32_t prev = walk[walk.size() - 2];
    const auto nb = g.neighbors(cur);
    scratch.resize(nb.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const std::uint32_t x = nb[i];
      scratch[i] = x == prev ? inv_p : (g.adjacent(x, prev) ? 1.0 : inv_q);
      total += scratch[i];
    }
    walk.push_back(nb[sample_index(scratch, total, rng)]);
  }
}

}  // namespace

WalkCorpus generate_walks(const Graph& g, const WalkParams& params) {
  if (params.walks_per_node == 0 || params.walk_length == 0)
    throw Error(Errc::InvalidConfig, "walks_per_node and walk_length must be positive");
  if (!(params.p > 0.0) || !(params.q > 0.0)) throw Error(Errc::InvalidConfig, "p and q must be positive");

  std::vector<std::uint32_t> starts;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.degree(v) > 0) starts.push_back(static_cast<std::uint32_t>(v));

  WalkCorpus corpus;
  corpus.nodes = g.ids();
  corpus.params = params;
  const std::size_t per_round = starts.size();
  corpus.walks.resize(per_round * params.walks_per_node);

  auto run = [&](std::size_t first, std::size_t stride) {
    std::vector<double> scratch;
    for (std::size_t w = first; w < corpus.walks.size(); w += stride) {
      const std::size_t round = w / per_round;
      const std::uint32_t start = starts[w % per_round];
      Rng rng(derive_seed(params.seed, round * g.size() + start));
      walk_from(g, start, params, rng, scratch, corpus.walks[w]);
    }
  };

  const unsigned threads = std::max(1u, params.threads);
  if (threads == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back(run, t, threads);
  }
  return corpus;
}

}  // namespace npsac
