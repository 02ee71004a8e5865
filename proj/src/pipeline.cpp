#include "npsac/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "npsac/error.hpp"
#include "npsac/plot.hpp"
#include "npsac/post_view.hpp"
#include "npsac/predict.hpp"
#include "npsac/profile_view.hpp"
#include "npsac/rng.hpp"
#include "npsac/text.hpp"

namespace npsac {

using nlohmann::ordered_json;

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "seed", "out_dir",
    "input.synth", "input.accounts", "input.posts", "input.edges_follower", "input.edges_friend", "input.labels",
    "input.vectors", "input.now",
    "synth.n", "synth.clone_rate", "synth.noise", "synth.seed", "synth.community_size", "synth.p_intra",
    "synth.p_inter", "synth.neighbor_overlap", "synth.lookalike_rate", "synth.no_post_rate", "synth.hubs_per_community",
    "synth.now",
    "pairs.threshold", "pairs.blocking", "pairs.threads",
    "post.embedder", "post.hash_dim", "post.dim",
    "node2vec.p", "node2vec.q", "node2vec.walks_per_node", "node2vec.walk_length", "node2vec.dim", "node2vec.window",
    "node2vec.negatives", "node2vec.epochs", "node2vec.learning_rate", "node2vec.threads",
    "fusion.weights", "fusion.k", "fusion.ridge", "fusion.relative_ridge", "fusion.center", "fusion.solver",
    "detect.threshold",
    "eval.sweep_grid", "eval.baselines", "eval.gridsearch", "eval.weight_levels",
    "bps.k", "bps.x", "bps.mu", "bps.lambda",
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

template <typename F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

template <typename Writer>
void write_artifact(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  write_file_atomic(path, out.str());
}

ordered_json metrics_block(std::span<const CandidatePair> verdicts, const LabelSet& labels) {
  const Confusion c = confusion(verdicts, labels);
  ordered_json j;
  j["confusion"] = to_json(c);
  j["metrics"] = to_json(metrics(c));
  return j;
}

std::string read_now_file(const std::filesystem::path& accounts_path) {
  const auto cfg_path = accounts_path.parent_path() / "dataset.cfg";
  if (!std::filesystem::exists(cfg_path))
    throw Error(Errc::InvalidConfig, "input.now is unset and no dataset.cfg next to the accounts file");
  return KeyValueConfig::load(cfg_path).get_string("now", "");
}

}  // namespace

ordered_json to_json(const Confusion& c) {
  return ordered_json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

ordered_json to_json(const Metrics& m) {
  return ordered_json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"f2", m.f2}};
}

ordered_json to_json(std::span<const SweepRow> rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["threshold"] = r.threshold;
    j["predicted_positive"] = r.predicted_positive;
    j["confusion"] = to_json(r.confusion);
    j["metrics"] = to_json(r.metrics);
    arr.push_back(std::move(j));
  }
  return arr;
}

PipelineConfig pipeline_config(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  for (const auto& [key, value] : kv.entries())
    if (!kKnownKeys.contains(key)) throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");

  PipelineConfig c;
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", 7));
  if (const char* env = std::getenv("NPSAC_SEED"); env && *env) {
    try {
      c.seed = static_cast<std::uint64_t>(parse_int(env));
    } catch (const Error&) {
      throw Error(Errc::InvalidConfig, "NPSAC_SEED is not an integer");
    }
  }
  c.out_dir = resolve(base_dir, kv.get_string("out_dir", "run"));

  c.use_synth = kv.get_bool("input.synth", false);
  c.synth.n_accounts = kv.get_size("synth.n", c.synth.n_accounts);
  c.synth.clone_rate = kv.get_double("synth.clone_rate", c.synth.clone_rate);
  c.synth.noise = kv.get_double("synth.noise", c.synth.noise);
  c.synth.seed = static_cast<std::uint64_t>(kv.get_int("synth.seed", static_cast<long long>(c.seed)));
  c.synth.community_size = kv.get_size("synth.community_size", c.synth.community_size);
  c.synth.p_intra = kv.get_double("synth.p_intra", c.synth.p_intra);
  c.synth.p_inter = kv.get_double("synth.p_inter", c.synth.p_inter);
  c.synth.neighbor_overlap = kv.get_double("synth.neighbor_overlap", c.synth.neighbor_overlap);
  c.synth.lookalike_rate = kv.get_double("synth.lookalike_rate", c.synth.lookalike_rate);
  c.synth.no_post_rate = kv.get_double("synth.no_post_rate", c.synth.no_post_rate);
  c.synth.hubs_per_community = kv.get_size("synth.hubs_per_community", c.synth.hubs_per_community);
  c.synth.now = kv.get_string("synth.now", c.synth.now);

  c.accounts = resolve(base_dir, kv.get_string("input.accounts", ""));
  c.posts = resolve(base_dir, kv.get_string("input.posts", ""));
  c.edges_follower = resolve(base_dir, kv.get_string("input.edges_follower", ""));
  c.edges_friend = resolve(base_dir, kv.get_string("input.edges_friend", ""));
  c.labels = resolve(base_dir, kv.get_string("input.labels", ""));
  c.vectors = resolve(base_dir, kv.get_string("input.vectors", ""));
  c.now = kv.get_string("input.now", "");

  c.pairs.threshold = kv.get_double("pairs.threshold", c.pairs.threshold);
  c.pairs.block_first_char = kv.get_bool("pairs.blocking", false);
  c.pairs.threads = static_cast<unsigned>(kv.get_size("pairs.threads", 1));

  c.embedder = kv.get_string("post.embedder", c.embedder);
  if (c.embedder != "hash" && c.embedder != "external")
    throw Error(Errc::InvalidConfig, "post.embedder must be hash or external");
  c.hash_dim = kv.get_size("post.hash_dim", c.hash_dim);
  c.post_dim = kv.get_size("post.dim", c.post_dim);

  c.walks.p = kv.get_double("node2vec.p", c.walks.p);
  c.walks.q = kv.get_double("node2vec.q", c.walks.q);
  c.walks.walks_per_node = kv.get_size("node2vec.walks_per_node", c.walks.walks_per_node);
  c.walks.walk_length = kv.get_size("node2vec.walk_length", c.walks.walk_length);
  c.skipgram.dim = kv.get_size("node2vec.dim", c.skipgram.dim);
  c.skipgram.window = kv.get_size("node2vec.window", c.skipgram.window);
  c.skipgram.negatives = kv.get_size("node2vec.negatives", c.skipgram.negatives);
  c.skipgram.epochs = kv.get_size("node2vec.epochs", c.skipgram.epochs);
  c.skipgram.learning_rate = kv.get_double("node2vec.learning_rate", c.skipgram.learning_rate);
  c.skipgram.threads = static_cast<unsigned>(kv.get_size("node2vec.threads", 1));
  c.walks.threads = c.skipgram.threads;

  c.fusion.weights = kv.get_doubles("fusion.weights", c.fusion.weights);
  c.fusion.k = kv.get_size("fusion.k", c.fusion.k);
  if (kv.has("fusion.ridge")) c.fusion.ridge = kv.get_double("fusion.ridge", 0.0);
  c.fusion.relative_ridge = kv.get_double("fusion.relative_ridge", c.fusion.relative_ridge);
  c.center_views = kv.get_bool("fusion.center", c.center_views);
  const std::string solver = kv.get_string("fusion.solver", "dense");
  if (solver == "dense") c.fusion.solver = EigenSolverKind::Dense;
  else if (solver == "subspace") c.fusion.solver = EigenSolverKind::Subspace;
  else throw Error(Errc::InvalidConfig, "fusion.solver must be dense or subspace");
  c.fusion.seed = c.seed;

  c.threshold = kv.get_double("detect.threshold", c.threshold);
  if (kv.has("eval.sweep_grid")) c.sweep_grid = parse_grid(kv.get_string("eval.sweep_grid", ""));
  c.run_baselines = kv.get_bool("eval.baselines", c.run_baselines);
  c.run_gridsearch = kv.get_bool("eval.gridsearch", c.run_gridsearch);
  c.weight_levels = kv.get_doubles("eval.weight_levels", c.weight_levels);

  c.bps.k = kv.get_double("bps.k", c.bps.k);
  c.bps.x = kv.get_double("bps.x", c.bps.x);
  c.bps.mu = kv.get_double("bps.mu", c.bps.mu);
  c.bps.lambda = kv.get_double("bps.lambda", c.bps.lambda);

  c.walks.seed = derive_seed(c.seed, 11);
  c.skipgram.seed = derive_seed(c.seed, 21);
  return c;
}

ViewMatrix build_network_view(const EdgeSet& edges, std::span<const AccountId> order, const WalkParams& walks,
                              const SkipGramParams& skipgram, std::string name) {
  const Graph g = build_graph(edges);
  const WalkCorpus corpus = generate_walks(g, walks);
  if (corpus.walks.empty()) {
    // No edges at all: every account is isolated and gets a zero row.
    NodeEmbeddings empty;
    empty.dim = skipgram.dim;
    return network_view(empty, order, std::move(name));
  }
  return network_view(train_skipgram(corpus, skipgram), order, std::move(name));
}

std::vector<ViewMatrix> prepare_views(std::span<const ViewMatrix> views, bool center) {
  std::vector<ViewMatrix> out;
  for (const auto& v : views) out.push_back(center ? center_columns(v) : v);
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw StageError("cli", "cannot create '" + cfg.out_dir.string() + "': " + ec.message());

  fs::path accounts_path = cfg.accounts, posts_path = cfg.posts, follower_path = cfg.edges_follower,
           friend_path = cfg.edges_friend, labels_path = cfg.labels;
  std::string now_text = cfg.now;
  if (cfg.use_synth) {
    stage("synth", [&] {
      const fs::path data_dir = cfg.out_dir / "data";
      const Dataset ds = synth_generate(cfg.synth);
      write_dataset(ds, data_dir);
      accounts_path = data_dir / "accounts.jsonl";
      posts_path = data_dir / "posts.jsonl";
      follower_path = data_dir / "edges_follower.csv";
      friend_path = data_dir / "edges_friend.csv";
      labels_path = data_dir / "labels.csv";
      if (now_text.empty()) now_text = cfg.synth.now;
    });
  }

  LoadedData data;
  std::size_t dropped_posts = 0;
  stage("ingest", [&] {
    if (accounts_path.empty()) throw Error(Errc::InvalidConfig, "input.accounts is required");
    data.accounts = load_accounts(accounts_path);
    data.order = canonical_order(data.accounts);
    if (!posts_path.empty()) {
      auto loaded = load_posts(posts_path, data.accounts);
      data.posts = std::move(loaded.posts);
      dropped_posts = loaded.dropped_unknown_author;
    }
    if (!labels_path.empty()) data.labels = load_labels(labels_path);
  });

  const std::vector<CandidatePair> pairs = stage("pairgen", [&] {
    auto p = generate_pairs(data.accounts, cfg.pairs);
    write_artifact(cfg.out_dir / "pairs.csv", [&](std::ostream& o) { write_pairs(o, p); });
    return p;
  });

  std::vector<ViewMatrix> views(4);
  stage("view-post", [&] {
    if (cfg.embedder == "external") {
      if (cfg.vectors.empty()) throw Error(Errc::InvalidConfig, "post.embedder = external needs input.vectors");
      const VectorTable table = load_vectors(cfg.vectors);
      if (table.dim != cfg.post_dim)
        throw Error(Errc::DimensionMismatch, "vectors have dim " + std::to_string(table.dim) + ", post.dim is " +
                                                 std::to_string(cfg.post_dim));
      views[0] = account_post_view(data.posts, data.order, table);
    } else {
      views[0] = account_post_view(data.posts, data.order, HashEmbedder(cfg.hash_dim));
    }
    views[0].view_name = kViewNames[0];
  });

  std::size_t self_loops = 0;
  stage("view-network", [&] {
    if (friend_path.empty() || follower_path.empty())
      throw Error(Errc::InvalidConfig, "input.edges_friend and input.edges_follower are required");
    const LoadedEdges friends = load_edges(friend_path, EdgeKind::Friend);
    const LoadedEdges follower = load_edges(follower_path, EdgeKind::Follower);
    self_loops = friends.dropped_self_loops + follower.dropped_self_loops;
    WalkParams walks = cfg.walks;
    SkipGramParams sg = cfg.skipgram;
    views[1] = build_network_view(friends.edges, data.order, walks, sg, kViewNames[1]);
    walks.seed = derive_seed(cfg.walks.seed, 1);
    sg.seed = derive_seed(cfg.skipgram.seed, 1);
    views[2] = build_network_view(follower.edges, data.order, walks, sg, kViewNames[2]);
  });

  stage("view-profile", [&] {
    if (now_text.empty()) now_text = read_now_file(accounts_path);
    data.now = parse_rfc3339(now_text);
    views[3] = profile_view(data.accounts, data.order, data.now);
    views[3].view_name = kViewNames[3];
    fs::create_directories(cfg.out_dir / "views");
    for (const auto& v : views)
      write_artifact(cfg.out_dir / "views" / (v.view_name + ".tsv"), [&](std::ostream& o) { write_view(o, v); });
  });

  const std::vector<ViewMatrix> prepared = prepare_views(views, cfg.center_views);
  WgccaOptions fusion = cfg.fusion;
  const FusedEmbedding fused = stage("fusion-wgcca", [&] {
    fusion.k = std::min<std::size_t>(fusion.k, data.order.size());
    auto f = wgcca_fit(prepared, fusion);
    write_artifact(cfg.out_dir / "fused.tsv", [&](std::ostream& o) {
      write_view(o, ViewMatrix{"fused", f.order, f.G});
    });
    return f;
  });

  const std::vector<CandidatePair> verdicts = stage("predict", [&] {
    auto v = classify_pairs(pairs, EmbeddingTable(fused), cfg.threshold);
    write_artifact(cfg.out_dir / "verdicts.csv", [&](std::ostream& o) { write_verdicts(o, v); });
    return v;
  });

  ordered_json report;
  stage("eval", [&] {
    ordered_json counts;
    counts["accounts"] = data.accounts.size();
    counts["posts"] = data.posts.size();
    counts["posts_dropped_unknown_author"] = dropped_posts;
    counts["self_loops_dropped"] = self_loops;
    counts["candidate_pairs"] = pairs.size();
    counts["predicted_clone_pairs"] = static_cast<std::size_t>(std::count_if(
        verdicts.begin(), verdicts.end(), [](const CandidatePair& p) { return *p.verdict == Verdict::ClonePair; }));
    if (data.labels) {
      counts["labels"] = data.labels->size();
      counts["labels_outside_candidates"] = labels_outside(pairs, *data.labels);
    }
    report["counts"] = counts;

    ordered_json fj;
    fj["k"] = fused.k;
    fj["weights"] = fused.weights;
    fj["ridges"] = fused.ridges;
    fj["centered"] = cfg.center_views;
    fj["eigenvalues"] = std::vector<double>(fused.eigenvalues.data(), fused.eigenvalues.data() + fused.eigenvalues.size());
    report["fusion"] = fj;
    report["threshold"] = cfg.threshold;
    if (!data.labels) return;

    const LabelSet& labels = *data.labels;
    const ordered_json main = metrics_block(verdicts, labels);
    report["confusion"] = main["confusion"];
    report["metrics"] = main["metrics"];
    const auto sweep = threshold_sweep(verdicts, labels, cfg.sweep_grid);
    report["sweep"] = to_json(sweep);
    write_artifact(cfg.out_dir / "sweep.svg", [&](std::ostream& o) { o << render_sweep_svg(sweep, "wGCCA threshold sweep"); });

    if (cfg.run_baselines) {
      ordered_json baselines;
      const ViewMatrix concat = concat_fuse(prepared);
      baselines["concat"] = metrics_block(classify_pairs(pairs, EmbeddingTable(concat), cfg.threshold), labels);
      baselines["concat"]["dim"] = concat.dim();
      const Graph friend_graph = build_graph(load_edges(friend_path, EdgeKind::Friend).edges);
      baselines["bps"] = metrics_block(bps_classify_pairs(pairs, data.accounts, friend_graph, cfg.bps), labels);
      report["baselines"] = baselines;

      ordered_json ablation;
      constexpr const char* kAblationNames[] = {"posts", "net_f", "net_fl", "pa"};
      for (std::size_t i = 0; i < prepared.size(); ++i)
        ablation[kAblationNames[i]] =
            metrics_block(classify_pairs(pairs, EmbeddingTable(prepared[i]), cfg.threshold), labels);
      report["ablation"] = ablation;
    }

    if (cfg.run_gridsearch) {
      const auto grid = weight_grid(prepared.size(), cfg.weight_levels);
      const auto rows = weight_grid_search(prepared, grid, pairs, labels, fusion, cfg.threshold);
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) {
        ordered_json j;
        j["weights"] = r.weights;
        j["confusion"] = to_json(r.confusion);
        j["metrics"] = to_json(r.metrics);
        arr.push_back(std::move(j));
      }
      report["gridsearch"] = arr;
    }
  });

  PipelineResult result;
  result.report = std::move(report);
  result.report_path = cfg.out_dir / "report.json";
  stage("eval", [&] { write_file_atomic(result.report_path, result.report.dump(2) + "\n"); });
  return result;
}

}  // namespace npsac
