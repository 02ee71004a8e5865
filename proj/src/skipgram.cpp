#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "npsac/error.hpp"
#include "npsac/network_view.hpp"
#include "npsac/rng.hpp"

namespace npsac {

namespace {

// -log(sigmoid(x)), stable for large |x|.
double neg_log_sigmoid(double x) noexcept { return std::log1p(std::exp(-std::abs(x))) + std::max(-x, 0.0); }

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// outs[0] is the positive context, the rest are negatives. Fills
// grad_center (dim) and grad_outs (count x dim, row-major); returns the loss.
double sgns_kernel(const double* center, const double* const* outs, std::size_t count, std::size_t dim,
                   double* grad_center, double* grad_outs) noexcept {
  std::fill(grad_center, grad_center + dim, 0.0);
  double loss = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double* out = outs[j];
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) dot += center[d] * out[d];
    const double label = j == 0 ? 1.0 : 0.0;
    loss += j == 0 ? neg_log_sigmoid(dot) : neg_log_sigmoid(-dot);
    // dL/d(dot) = sigmoid(dot) - label
    const double g = sigmoid(dot) - label;
    double* gout = grad_outs + j * dim;
    for (std::size_t d = 0; d < dim; ++d) {
      grad_center[d] += g * out[d];
      gout[d] = g * center[d];
    }
  }
  return loss;
}

struct Vocab {
  std::vector<std::uint32_t> node_of;   // vocab index -> corpus node index
  std::vector<std::int64_t> index_of;   // corpus node index -> vocab index or -1
  std::vector<double> noise_cdf;        // unigram^0.75, cumulative
};

Vocab build_vocab(const WalkCorpus& corpus) {
  std::vector<std::size_t> counts(corpus.nodes.size(), 0);
  for (const auto& walk : corpus.walks)
    for (auto v : walk) ++counts.at(v);
  Vocab vocab;
  vocab.index_of.assign(corpus.nodes.size(), -1);
  double acc = 0.0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (counts[v] == 0) continue;
    vocab.index_of[v] = static_cast<std::int64_t>(vocab.node_of.size());
    vocab.node_of.push_back(static_cast<std::uint32_t>(v));
    acc += std::pow(static_cast<double>(counts[v]), 0.75);
    vocab.noise_cdf.push_back(acc);
  }
  return vocab;
}

std::size_t sample_noise(const std::vector<double>& cdf, Rng& rng) {
  const double target = rng.uniform() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
}

// Row access into the shared parameter matrices. The relaxed variant lets
// several threads update the same rows without locks.
template <bool Relaxed>
struct RowAccess {
  static void load(double* row, std::size_t dim, double* dst) {
    if constexpr (Relaxed) {
      for (std::size_t d = 0; d < dim; ++d) dst[d] = std::atomic_ref<double>(row[d]).load(std::memory_order_relaxed);
    } else {
      std::copy(row, row + dim, dst);
    }
  }
  static void add_scaled(double* row, std::size_t dim, const double* delta, double scale) {
    for (std::size_t d = 0; d < dim; ++d) {
      if constexpr (Relaxed) {
        std::atomic_ref<double> ref(row[d]);
        ref.store(ref.load(std::memory_order_relaxed) + scale * delta[d], std::memory_order_relaxed);
      } else {
        row[d] += scale * delta[d];
      }
    }
  }
};

struct Model {
  std::size_t dim;
  std::vector<double> input;   // syn0
  std::vector<double> output;  // syn1neg
  double* in_row(std::size_t v) { return input.data() + v * dim; }
  double* out_row(std::size_t v) { return output.data() + v * dim; }
};

struct Progress {
  std::size_t processed = 0;  // tokens consumed so far by this worker
};

template <bool Relaxed>
void train_walks(Model& model, const Vocab& vocab, const WalkCorpus& corpus, std::span<const std::size_t> walk_ids,
                 const SkipGramParams& params, Rng& rng, std::size_t token_offset, std::size_t total_tokens,
                 Progress& progress) {
  using Access = RowAccess<Relaxed>;
  const std::size_t dim = model.dim;
  const std::size_t max_out = params.negatives + 1;
  std::vector<double> center(dim), grad_center(dim), out_buf(max_out * dim), grad_outs(max_out * dim);
  std::vector<const double*> out_ptrs(max_out);
  std::vector<std::size_t> out_ids(max_out);

  for (std::size_t w : walk_ids) {
    const auto& walk = corpus.walks[w];
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const double progress_frac =
          static_cast<double>(token_offset + progress.processed) / static_cast<double>(total_tokens + 1);
      const double lr = params.learning_rate * std::max(1e-4, 1.0 - progress_frac);
      ++progress.processed;

      const auto c = static_cast<std::size_t>(vocab.index_of[walk[i]]);
      const std::size_t shrink = rng.index(params.window);
      const std::size_t span = params.window - shrink;
      const std::size_t lo = i >= span ? i - span : 0;
      const std::size_t hi = std::min(walk.size() - 1, i + span);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const auto ctx = static_cast<std::size_t>(vocab.index_of[walk[j]]);
        std::size_t count = 0;
        out_ids[count++] = ctx;
        for (std::size_t k = 0; k < params.negatives; ++k) {
          const std::size_t neg = sample_noise(vocab.noise_cdf, rng);
          if (neg == ctx) continue;
          out_ids[count++] = neg;
        }
        Access::load(model.in_row(c), dim, center.data());
        for (std::size_t k = 0; k < count; ++k) {
          Access::load(model.out_row(out_ids[k]), dim, out_buf.data() + k * dim);
          out_ptrs[k] = out_buf.data() + k * dim;
        }
        sgns_kernel(center.data(), out_ptrs.data(), count, dim, grad_center.data(), grad_outs.data());
        for (std::size_t k = 0; k < count; ++k)
          Access::add_scaled(model.out_row(out_ids[k]), dim, grad_outs.data() + k * dim, -lr);
        Access::add_scaled(model.in_row(c), dim, grad_center.data(), -lr);
      }
    }
  }
}

// Expected negative-sampling loss per (center, context) pair over the whole
// corpus, weighted by how often the shrinking window reaches each offset.
// The negative term is exact for vocabularies up to kObjectiveNoiseNodes and
// otherwise uses one fixed noise sample, so epochs stay comparable. Unlike a
// running mean of per-update losses this carries no learning-rate bias.
constexpr std::size_t kObjectiveNoiseNodes = 1024;

double corpus_objective(const Model& model, const Vocab& vocab, const WalkCorpus& corpus,
                        const SkipGramParams& params) {
  const std::size_t V = vocab.node_of.size(), dim = model.dim;
  const double total_mass = vocab.noise_cdf.back();
  auto noise_p = [&](std::size_t v) { return (vocab.noise_cdf[v] - (v ? vocab.noise_cdf[v - 1] : 0.0)) / total_mass; };
  auto dot = [&](std::size_t c, std::size_t u) {
    const double* x = model.input.data() + c * dim;
    const double* y = model.output.data() + u * dim;
    double d = 0.0;
    for (std::size_t k = 0; k < dim; ++k) d += x[k] * y[k];
    return d;
  };

  std::vector<std::pair<std::size_t, double>> noise;  // (node, weight)
  if (V <= kObjectiveNoiseNodes) {
    for (std::size_t v = 0; v < V; ++v) noise.emplace_back(v, noise_p(v));
  } else {
    Rng rng(derive_seed(params.seed, 0x0B1EC7));
    for (std::size_t i = 0; i < kObjectiveNoiseNodes; ++i)
      noise.emplace_back(sample_noise(vocab.noise_cdf, rng), 1.0 / kObjectiveNoiseNodes);
  }
  std::vector<double> expected_negative(V, 0.0);
  for (std::size_t c = 0; c < V; ++c)
    for (const auto& [u, w] : noise) expected_negative[c] += w * neg_log_sigmoid(-dot(c, u));

  const auto W = static_cast<double>(params.window);
  const auto k = static_cast<double>(params.negatives);
  double loss = 0.0, weight = 0.0;
  for (const auto& walk : corpus.walks)
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const auto c = static_cast<std::size_t>(vocab.index_of[walk[i]]);
      const std::size_t lo = i >= params.window ? i - params.window : 0;
      const std::size_t hi = std::min(walk.size() - 1, i + params.window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const auto ctx = static_cast<std::size_t>(vocab.index_of[walk[j]]);
        const double dist = static_cast<double>(j > i ? j - i : i - j);
        const double w = (W - dist + 1.0) / W;
        const double d = dot(c, ctx);
        // negatives equal to the context are skipped during training
        const double neg = expected_negative[c] - noise_p(ctx) * neg_log_sigmoid(-d);
        loss += w * (neg_log_sigmoid(d) + k * neg);
        weight += w;
      }
    }
  return weight > 0.0 ? loss / weight : 0.0;
}

}  // namespace

double sgns_loss(const Eigen::VectorXd& center, const Eigen::VectorXd& context,
                 std::span<const Eigen::VectorXd> negatives) {
  double loss = neg_log_sigmoid(center.dot(context));
  for (const auto& n : negatives) loss += neg_log_sigmoid(-center.dot(n));
  return loss;
}

SgnsGradient sgns_gradient(const Eigen::VectorXd& center, const Eigen::VectorXd& context,
                           std::span<const Eigen::VectorXd> negatives) {
  const auto dim = static_cast<std::size_t>(center.size());
  if (static_cast<std::size_t>(context.size()) != dim)
    throw Error(Errc::DimensionMismatch, "context vector length differs from center");
  std::vector<const double*> outs{context.data()};
  for (const auto& n : negatives) {
    if (static_cast<std::size_t>(n.size()) != dim)
      throw Error(Errc::DimensionMismatch, "negative vector length differs from center");
    outs.push_back(n.data());
  }
  SgnsGradient grad;
  grad.center.resize(center.size());
  std::vector<double> grad_outs(outs.size() * dim);
  grad.loss = sgns_kernel(center.data(), outs.data(), outs.size(), dim, grad.center.data(), grad_outs.data());
  grad.context = Eigen::Map<Eigen::VectorXd>(grad_outs.data(), center.size());
  for (std::size_t k = 1; k < outs.size(); ++k)
    grad.negatives.emplace_back(Eigen::Map<Eigen::VectorXd>(grad_outs.data() + k * dim, center.size()));
  return grad;
}

std::optional<Eigen::VectorXd> NodeEmbeddings::find(const AccountId& id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return std::nullopt;
  return vectors.row(it - ids.begin()).transpose();
}

NodeEmbeddings train_skipgram(const WalkCorpus& corpus, const SkipGramParams& params) {
  std::size_t tokens_per_epoch = 0;
  for (const auto& w : corpus.walks) tokens_per_epoch += w.size();
  if (tokens_per_epoch == 0) throw Error(Errc::EmptyCorpus, "walk corpus is empty");
  if (params.dim == 0 || params.window == 0 || params.epochs == 0 || !(params.learning_rate > 0.0))
    throw Error(Errc::InvalidConfig, "dim, window, epochs and learning_rate must be positive");

  const Vocab vocab = build_vocab(corpus);
  const std::size_t V = vocab.node_of.size();
  Model model{params.dim, std::vector<double>(V * params.dim), std::vector<double>(V * params.dim, 0.0)};
  {
    Rng init(derive_seed(params.seed, 0xC0FFEE));
    for (auto& x : model.input) x = (init.uniform() - 0.5) / static_cast<double>(params.dim);
  }

  const std::size_t total_tokens = tokens_per_epoch * params.epochs;
  std::vector<std::size_t> order(corpus.walks.size());
  std::vector<double> epoch_loss;
  const unsigned threads = std::max(1u, params.threads);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    Rng shuffler(derive_seed(params.seed, 1000 + epoch));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffler.index(i)]);
    const std::size_t offset = epoch * tokens_per_epoch;

    if (threads == 1) {
      Rng rng(derive_seed(params.seed, 2000 + epoch));
      Progress prog;
      train_walks<false>(model, vocab, corpus, order, params, rng, offset, total_tokens, prog);
      epoch_loss.push_back(corpus_objective(model, vocab, corpus, params));
    } else {
      std::vector<Progress> progs(threads);
      {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (order.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
          const std::size_t first = std::min(order.size(), t * chunk);
          const std::size_t last = std::min(order.size(), first + chunk);
          workers.emplace_back([&, t, first, last] {
            Rng rng(derive_seed(params.seed, 2000 + epoch * 1024 + t));
            // Each worker decays the rate as if it owned its share of the epoch.
            train_walks<true>(model, vocab, corpus, std::span(order).subspan(first, last - first), params, rng,
                              offset + (first * tokens_per_epoch) / std::max<std::size_t>(1, order.size()),
                              total_tokens, progs[t]);
          });
        }
      }
      epoch_loss.push_back(corpus_objective(model, vocab, corpus, params));
    }
  }

  NodeEmbeddings emb;
  emb.dim = params.dim;
  emb.epoch_loss = std::move(epoch_loss);
  emb.vectors.resize(static_cast<Eigen::Index>(V), static_cast<Eigen::Index>(params.dim));
  for (std::size_t v = 0; v < V; ++v) {
    emb.ids.push_back(corpus.nodes[vocab.node_of[v]]);
    for (std::size_t d = 0; d < params.dim; ++d)
      emb.vectors(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(d)) = model.input[v * params.dim + d];
  }
  return emb;
}

ViewMatrix network_view(const NodeEmbeddings& emb, std::span<const AccountId> order, std::string name) {
  ViewMatrix view;
  view.view_name = std::move(name);
  view.order.assign(order.begin(), order.end());
  view.data = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order.size()), static_cast<Eigen::Index>(emb.dim));
  for (std::size_t r = 0; r < order.size(); ++r)
    if (auto v = emb.find(order[r])) view.data.row(static_cast<Eigen::Index>(r)) = v->transpose();
  return view;
}

}  // namespace npsac
