#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "npsac/model.hpp"

namespace npsac {

struct SynthConfig {
  std::size_t n_accounts = 200;   // original accounts; clones come on top
  double clone_rate = 0.1;        // clones = round(n_accounts * clone_rate)
  double noise = 0.2;             // text substitution rate and attribute jitter
  std::uint64_t seed = 7;
  std::size_t community_size = 20;
  double p_intra = 0.3;
  double p_inter = 0.01;
  double neighbor_overlap = 0.2;  // share of the victim's neighbors a clone keeps
  double lookalike_rate = 0.1;    // benign name-alike pairs among originals, per original
  double no_post_rate = 0.05;
  std::size_t hubs_per_community = 3;  // popular ids that appear only in the edge files
  std::string now = "2024-06-01T00:00:00Z";
};

struct Dataset {
  std::vector<Account> accounts;  // sorted by id
  std::vector<Post> posts;
  EdgeSet follower{EdgeKind::Follower, {}};
  EdgeSet friends{EdgeKind::Friend, {}};
  std::vector<PairKey> clone_pairs;      // (victim, clone)
  std::vector<PairKey> lookalike_pairs;  // benign, similar names only
  UtcTime now{};
};

/// Deterministic per config. InvalidConfig unless 0 < clone_rate < 1,
/// noise in [0, 1] and at least one clone results.
Dataset synth_generate(const SynthConfig& config);

/// Ground-truth clone pairs as unordered keys.
LabelSet synth_labels(const Dataset& dataset);

/// accounts.jsonl, posts.jsonl, edges_follower.csv, edges_friend.csv,
/// labels.csv and dataset.cfg (reference time), each written atomically.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace npsac
