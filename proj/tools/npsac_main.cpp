#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "npsac/baselines.hpp"
#include "npsac/config.hpp"
#include "npsac/error.hpp"
#include "npsac/eval.hpp"
#include "npsac/ingest.hpp"
#include "npsac/pairgen.hpp"
#include "npsac/pipeline.hpp"
#include "npsac/plot.hpp"
#include "npsac/post_view.hpp"
#include "npsac/predict.hpp"
#include "npsac/profile_view.hpp"
#include "npsac/rng.hpp"
#include "npsac/synth.hpp"
#include "npsac/wgcca.hpp"

using namespace npsac;
namespace fs = std::filesystem;

namespace {

template <typename Writer>
void emit(const std::string& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  if (path.empty() || path == "-") std::cout << out.str();
  else write_file_atomic(path, out.str());
}

std::vector<ViewMatrix> read_views(const std::vector<std::string>& paths, bool center) {
  std::vector<ViewMatrix> views;
  for (const auto& p : paths) views.push_back(read_view(p));
  return prepare_views(views, center);
}

LabelSet labels_or_throw(const std::string& path) { return load_labels(path); }

std::vector<SweepRow> sweep_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_array() ? j : j.at("sweep");
  std::vector<SweepRow> rows;
  for (const auto& r : arr) {
    SweepRow row;
    row.threshold = r.at("threshold").get<double>();
    row.predicted_positive = r.value("predicted_positive", std::size_t{0});
    const auto& m = r.at("metrics");
    row.metrics = {m.at("precision").get<double>(), m.at("recall").get<double>(), m.at("f1").get<double>(),
                   m.at("f2").get<double>()};
    rows.push_back(row);
  }
  return rows;
}

void print_json(const nlohmann::ordered_json& j, const std::string& out) {
  emit(out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

nlohmann::ordered_json metrics_json(std::span<const CandidatePair> verdicts, const LabelSet& labels) {
  const Confusion c = confusion(verdicts, labels);
  nlohmann::ordered_json j;
  j["confusion"] = to_json(c);
  j["metrics"] = to_json(metrics(c));
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised detection of cloned social accounts"};
  app.require_subcommand(1);

  // synth
  SynthConfig synth_cfg;
  std::string synth_out = "data";
  auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic benchmark");
  synth->add_option("--n", synth_cfg.n_accounts, "Original accounts");
  synth->add_option("--clone-rate", synth_cfg.clone_rate);
  synth->add_option("--noise", synth_cfg.noise);
  synth->add_option("--seed", synth_cfg.seed);
  synth->add_option("--lookalike-rate", synth_cfg.lookalike_rate);
  synth->add_option("--out", synth_out, "Output directory");

  // pairs
  std::string accounts_path, out_path;
  PairGenOptions pair_opts;
  auto* pairs = app.add_subcommand("pairs", "Candidate pairs by name similarity");
  pairs->add_option("--accounts", accounts_path)->required();
  pairs->add_option("--threshold", pair_opts.threshold);
  pairs->add_flag("--blocking", pair_opts.block_first_char, "Only compare names sharing a first character");
  pairs->add_option("--threads", pair_opts.threads);
  pairs->add_option("--out", out_path);

  // views
  auto* views = app.add_subcommand("views", "Build one per-account view");
  views->require_subcommand(1);
  std::string posts_path, vectors_path, edges_path, now_text;
  std::size_t hash_dim = 256, expected_dim = 0;
  auto* vpost = views->add_subcommand("post", "Mean-pooled post embeddings");
  vpost->add_option("--accounts", accounts_path)->required();
  vpost->add_option("--posts", posts_path)->required();
  vpost->add_option("--vectors", vectors_path, "Precomputed vectors.tsv keyed by post id");
  vpost->add_option("--dim", expected_dim, "Expected vector dimension");
  vpost->add_option("--hash-dim", hash_dim);
  vpost->add_option("--out", out_path);

  WalkParams walk_params;
  SkipGramParams sg_params;
  std::uint64_t net_seed = 7;
  std::string view_name = "network";
  auto* vnet = views->add_subcommand("network", "node2vec embedding of one edge file");
  vnet->add_option("--accounts", accounts_path)->required();
  vnet->add_option("--edges", edges_path)->required();
  std::string edge_kind = "friend";
  vnet->add_option("--kind", edge_kind)->check(CLI::IsMember({"follower", "friend"}));
  vnet->add_option("--name", view_name);
  vnet->add_option("--p", walk_params.p);
  vnet->add_option("--q", walk_params.q);
  vnet->add_option("--walks", walk_params.walks_per_node);
  vnet->add_option("--length", walk_params.walk_length);
  vnet->add_option("--dim", sg_params.dim);
  vnet->add_option("--window", sg_params.window);
  vnet->add_option("--negatives", sg_params.negatives);
  vnet->add_option("--epochs", sg_params.epochs);
  vnet->add_option("--seed", net_seed);
  vnet->add_option("--out", out_path);

  auto* vprof = views->add_subcommand("profile", "Normalized profile attributes");
  vprof->add_option("--accounts", accounts_path)->required();
  vprof->add_option("--now", now_text, "Reference time, RFC 3339")->required();
  vprof->add_option("--out", out_path);

  // fuse
  std::vector<std::string> view_paths;
  WgccaOptions fuse_opts;
  bool center = false;
  std::string solver = "dense";
  double ridge = -1.0;
  auto* fuse = app.add_subcommand("fuse", "Weighted GCCA over several views");
  fuse->add_option("--views,--view", view_paths, "View files in weight order")->required();
  fuse->add_option("--weights", fuse_opts.weights)->delimiter(',');
  fuse->add_option("--k", fuse_opts.k);
  fuse->add_option("--ridge", ridge, "Absolute ridge for every view");
  fuse->add_option("--relative-ridge", fuse_opts.relative_ridge);
  fuse->add_option("--solver", solver)->check(CLI::IsMember({"dense", "subspace"}));
  fuse->add_flag("--center", center, "Center each view's columns first");
  fuse->add_option("--out", out_path);

  // detect / ablate
  std::string pairs_path, embedding_path, labels_path;
  double threshold = 0.1;
  auto* detect = app.add_subcommand("detect", "Cosine verdicts over an embedding");
  detect->add_option("--pairs", pairs_path)->required();
  detect->add_option("--fused,--embedding", embedding_path)->required();
  detect->add_option("--threshold", threshold);
  detect->add_flag("--center", center);
  detect->add_option("--out", out_path);

  std::string views_dir, ablate_view = "all";
  auto* ablate = app.add_subcommand("ablate", "Cosine verdicts from single views or their concatenation");
  ablate->add_option("--pairs", pairs_path)->required();
  ablate->add_option("--views-dir", views_dir, "Directory holding posts/net_friend/net_follower/profile .tsv")->required();
  ablate->add_option("--view", ablate_view)->check(CLI::IsMember({"posts", "net_f", "net_fl", "pa", "concat", "all"}));
  ablate->add_option("--labels", labels_path, "Print metrics per variant");
  ablate->add_option("--threshold", threshold);
  ablate->add_flag("--center", center);
  ablate->add_option("--out", out_path, "Output directory for verdicts_<variant>.csv");

  // baselines
  auto* baseline = app.add_subcommand("baseline", "Comparison methods");
  baseline->require_subcommand(1);
  BpsParams bps_params;
  std::string friends_path;
  auto* bps = baseline->add_subcommand("bps", "Attribute + common-friend score");
  bps->add_option("--pairs", pairs_path)->required();
  bps->add_option("--accounts", accounts_path)->required();
  bps->add_option("--friends", friends_path)->required();
  bps->add_option("--mu", bps_params.mu);
  bps->add_option("--k", bps_params.k);
  bps->add_option("--x", bps_params.x);
  bps->add_option("--out", out_path);
  auto* concat = baseline->add_subcommand("concat", "Cosine over concatenated views");
  concat->add_option("--pairs", pairs_path)->required();
  concat->add_option("--views,--view", view_paths)->required();
  concat->add_option("--threshold", threshold);
  concat->add_flag("--center", center);
  concat->add_option("--out", out_path);

  // eval / sweep
  std::string verdicts_path, grid_text = "0.1:0.9:0.1";
  auto* eval = app.add_subcommand("eval", "Confusion and metrics of a verdicts file");
  eval->add_option("--verdicts", verdicts_path)->required();
  eval->add_option("--labels", labels_path)->required();
  eval->add_option("--report,--out", out_path);
  auto* sweep = app.add_subcommand("sweep", "Metrics across thresholds");
  sweep->add_option("--verdicts", verdicts_path)->required();
  sweep->add_option("--labels", labels_path)->required();
  sweep->add_option("--grid", grid_text, "lo:hi:step");
  sweep->add_option("--out", out_path);

  std::vector<double> levels{0.25, 0.5, 1.0};
  auto* grid = app.add_subcommand("gridsearch", "Refit fusion for every weight combination");
  grid->add_option("--pairs", pairs_path)->required();
  grid->add_option("--labels", labels_path)->required();
  grid->add_option("--views,--view", view_paths)->required();
  grid->add_option("--weights-grid,--levels", levels)->delimiter(',');
  grid->add_option("--k", fuse_opts.k);
  grid->add_option("--threshold", threshold);
  grid->add_flag("--center", center);
  grid->add_option("--out", out_path);

  // report
  std::string report_path, title = "Threshold sweep";
  auto* report = app.add_subcommand("report", "Render results");
  report->require_subcommand(1);
  auto* plot = report->add_subcommand("plot", "SVG of P/R/F1/F2 against threshold");
  plot->add_option("--report", report_path, "report.json or a sweep JSON array")->required();
  plot->add_option("--title", title);
  plot->add_option("--out", out_path);

  // run
  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Whole pipeline from a config file");
  run->add_option("--config", config_path)->required();
  run->add_option("--set", overrides, "key=value override, repeatable");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const Dataset ds = synth_generate(synth_cfg);
      write_dataset(ds, synth_out);
      std::cerr << "wrote " << ds.accounts.size() << " accounts, " << ds.clone_pairs.size() << " clone pairs to "
                << synth_out << '\n';
    } else if (*pairs) {
      const auto accounts = load_accounts(accounts_path);
      const auto result = generate_pairs(accounts, pair_opts);
      emit(out_path, [&](std::ostream& o) { write_pairs(o, result); });
    } else if (*vpost) {
      const auto accounts = load_accounts(accounts_path);
      const auto order = canonical_order(accounts);
      const auto posts = load_posts(posts_path, accounts).posts;
      ViewMatrix v;
      if (!vectors_path.empty()) {
        const VectorTable table = load_vectors(vectors_path);
        if (expected_dim != 0 && table.dim != expected_dim)
          throw Error(Errc::DimensionMismatch, "vectors have dim " + std::to_string(table.dim));
        v = account_post_view(posts, order, table);
      } else {
        v = account_post_view(posts, order, HashEmbedder(hash_dim));
      }
      emit(out_path, [&](std::ostream& o) { write_view(o, v); });
    } else if (*vnet) {
      const auto accounts = load_accounts(accounts_path);
      walk_params.seed = derive_seed(net_seed, 11);
      sg_params.seed = derive_seed(net_seed, 21);
      const ViewMatrix v = build_network_view(load_edges(edges_path, parse_edge_kind(edge_kind)).edges,
                                              canonical_order(accounts), walk_params, sg_params, view_name);
      emit(out_path, [&](std::ostream& o) { write_view(o, v); });
    } else if (*vprof) {
      const auto accounts = load_accounts(accounts_path);
      const ViewMatrix v = profile_view(accounts, canonical_order(accounts), parse_rfc3339(now_text));
      emit(out_path, [&](std::ostream& o) { write_view(o, v); });
    } else if (*fuse) {
      if (ridge >= 0.0) fuse_opts.ridge = ridge;
      fuse_opts.solver = solver == "subspace" ? EigenSolverKind::Subspace : EigenSolverKind::Dense;
      const auto vs = read_views(view_paths, center);
      const FusedEmbedding f = wgcca_fit(vs, fuse_opts);
      emit(out_path, [&](std::ostream& o) { write_view(o, ViewMatrix{"fused", f.order, f.G}); });
    } else if (*detect) {
      const auto vs = read_views({embedding_path}, center);
      const auto verdicts = classify_pairs(load_pairs(pairs_path), EmbeddingTable(vs.front()), threshold);
      emit(out_path, [&](std::ostream& o) { write_verdicts(o, verdicts); });
    } else if (*ablate) {
      const std::pair<const char*, const char*> variants[] = {
          {"posts", "posts"}, {"net_f", "net_friend"}, {"net_fl", "net_follower"}, {"pa", "profile"}};
      std::vector<std::string> all_paths;
      for (const auto& [variant, file] : variants) all_paths.push_back((fs::path(views_dir) / (std::string(file) + ".tsv")).string());
      const auto all_views = read_views(all_paths, center);
      const auto candidates = load_pairs(pairs_path);
      std::optional<LabelSet> labels;
      if (!labels_path.empty()) labels = load_labels(labels_path);
      const fs::path out_dir = out_path.empty() ? fs::path(".") : fs::path(out_path);
      fs::create_directories(out_dir);
      nlohmann::ordered_json summary;
      auto run_variant = [&](const std::string& name, const ViewMatrix& view) {
        const auto verdicts = classify_pairs(candidates, EmbeddingTable(view), threshold);
        emit((out_dir / ("verdicts_" + name + ".csv")).string(), [&](std::ostream& o) { write_verdicts(o, verdicts); });
        if (labels) summary[name] = metrics_json(verdicts, *labels);
      };
      for (std::size_t i = 0; i < all_views.size(); ++i)
        if (ablate_view == "all" || ablate_view == variants[i].first) run_variant(variants[i].first, all_views[i]);
      if (ablate_view == "all" || ablate_view == "concat") run_variant("concat", concat_fuse(all_views));
      if (labels) std::cout << summary.dump(2) << '\n';
    } else if (*bps) {
      const auto accounts = load_accounts(accounts_path);
      const Graph g = build_graph(load_edges(friends_path, EdgeKind::Friend).edges);
      const auto verdicts = bps_classify_pairs(load_pairs(pairs_path), accounts, g, bps_params);
      emit(out_path, [&](std::ostream& o) { write_verdicts(o, verdicts); });
    } else if (*concat) {
      const auto vs = read_views(view_paths, center);
      const auto verdicts = classify_pairs(load_pairs(pairs_path), EmbeddingTable(concat_fuse(vs)), threshold);
      emit(out_path, [&](std::ostream& o) { write_verdicts(o, verdicts); });
    } else if (*eval) {
      print_json(metrics_json(load_verdicts(verdicts_path), labels_or_throw(labels_path)), out_path);
    } else if (*sweep) {
      const auto rows = threshold_sweep(load_verdicts(verdicts_path), labels_or_throw(labels_path), parse_grid(grid_text));
      print_json(to_json(rows), out_path);
    } else if (*grid) {
      const auto vs = read_views(view_paths, center);
      const auto rows = weight_grid_search(vs, weight_grid(vs.size(), levels), load_pairs(pairs_path),
                                           labels_or_throw(labels_path), fuse_opts, threshold);
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["weights"] = r.weights;
        j["confusion"] = to_json(r.confusion);
        j["metrics"] = to_json(r.metrics);
        arr.push_back(std::move(j));
      }
      print_json(arr, out_path);
    } else if (*plot) {
      const auto j = nlohmann::json::parse(read_file(report_path));
      const std::string svg = render_sweep_svg(sweep_from_json(j), title);
      emit(out_path, [&](std::ostream& o) { o << svg; });
    } else if (*run) {
      KeyValueConfig kv = KeyValueConfig::load(config_path);
      for (const auto& s : overrides) {
        auto [k, v] = parse_assignment(s);
        kv.set(std::move(k), std::move(v));
      }
      const PipelineConfig cfg = pipeline_config(kv, fs::path(config_path).parent_path());
      const PipelineResult result = run_pipeline(cfg);
      std::cerr << "report: " << result.report_path.string() << '\n';
      if (result.report.contains("metrics")) std::cout << result.report["metrics"].dump() << '\n';
    }
  } catch (const StageError& e) {
    std::cerr << "npsac: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "npsac: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "npsac: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
