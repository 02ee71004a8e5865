#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "npsac/baselines.hpp"
#include "npsac/config.hpp"
#include "npsac/eval.hpp"
#include "npsac/ingest.hpp"
#include "npsac/network_view.hpp"
#include "npsac/pairgen.hpp"
#include "npsac/synth.hpp"
#include "npsac/wgcca.hpp"

namespace npsac {

/// Failure inside one pipeline stage; what() reads "[stage] message".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct PipelineConfig {
  std::filesystem::path out_dir = "run";
  std::uint64_t seed = 7;

  bool use_synth = false;
  SynthConfig synth;

  std::filesystem::path accounts, posts, edges_follower, edges_friend, labels, vectors;
  std::string now;  // RFC 3339; empty means "take it from dataset.cfg next to accounts"

  PairGenOptions pairs;
  std::string embedder = "hash";  // hash | external
  std::size_t hash_dim = 256;
  std::size_t post_dim = 768;     // expected dim of external vectors
  WalkParams walks;
  SkipGramParams skipgram;
  WgccaOptions fusion;
  bool center_views = true;
  double threshold = 0.1;
  std::vector<double> sweep_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  BpsParams bps;
  bool run_baselines = true;
  bool run_gridsearch = false;
  std::vector<double> weight_levels{0.25, 0.5, 1.0};
};

/// Reads every documented key; unknown keys are rejected. NPSAC_SEED, when
/// set, overrides `seed`.
PipelineConfig pipeline_config(const KeyValueConfig& kv, const std::filesystem::path& base_dir = {});

/// Fixed names of the four fused views, in weight order.
inline constexpr const char* kViewNames[] = {"posts", "net_friend", "net_follower", "profile"};

struct LoadedData {
  std::vector<Account> accounts;
  std::vector<Post> posts;
  std::vector<AccountId> order;
  UtcTime now{};
  std::optional<LabelSet> labels;
};

struct ViewSet {
  std::vector<ViewMatrix> views;  // kViewNames order, raw (uncentered)
};

ViewMatrix build_network_view(const EdgeSet& edges, std::span<const AccountId> order, const WalkParams& walks,
                              const SkipGramParams& skipgram, std::string name);

/// Views as fed to fusion and to the cosine baselines.
std::vector<ViewMatrix> prepare_views(std::span<const ViewMatrix> views, bool center);

struct PipelineResult {
  nlohmann::ordered_json report;
  std::filesystem::path report_path;
};

/// synth (optional) -> ingest -> pairs -> views -> fuse -> detect -> eval.
/// Writes every intermediate artifact under out_dir. Throws StageError.
PipelineResult run_pipeline(const PipelineConfig& config);

nlohmann::ordered_json to_json(const Confusion& c);
nlohmann::ordered_json to_json(const Metrics& m);
nlohmann::ordered_json to_json(std::span<const SweepRow> rows);

}  // namespace npsac
