#pragma once

#include <span>
#include <vector>

#include "npsac/model.hpp"
#include "npsac/wgcca.hpp"

namespace npsac {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Counts over the scored pairs only; labels that were never scored are not
/// counted (see labels_outside). MissingVerdict if a pair has no verdict.
Confusion confusion(std::span<const CandidatePair> verdicts, const LabelSet& labels);

/// Labels whose pair does not occur in `pairs`.
std::size_t labels_outside(std::span<const CandidatePair> pairs, const LabelSet& labels);

/// Precision, recall, F1 and F2 with 0/0 taken as 0.
Metrics metrics(const Confusion& c);

/// F1 and F2 from precision and recall given as fractions.
Metrics metrics_from_rates(double precision, double recall);

struct SweepRow {
  double threshold = 0.0;
  std::size_t predicted_positive = 0;
  Confusion confusion;
  Metrics metrics;
};

/// Re-applies score >= threshold at every grid point. Grid must be
/// non-empty and ascending (InvalidConfig); every pair needs a score.
std::vector<SweepRow> threshold_sweep(std::span<const CandidatePair> scored, const LabelSet& labels,
                                      std::span<const double> grid);

/// "lo:hi:step" inclusive of hi (within half a step), e.g. "0.1:0.9:0.1".
std::vector<double> parse_grid(std::string_view spec);

struct GridRow {
  std::vector<double> weights;
  Metrics metrics;
  Confusion confusion;
};

/// Every weight vector with entries drawn from `levels` (|levels|^views rows).
std::vector<std::vector<double>> weight_grid(std::size_t views, std::span<const double> levels);

/// Refits wGCCA per weight vector (other options from `base`), scores the
/// pairs and ranks by F1 descending; ties keep grid order.
std::vector<GridRow> weight_grid_search(std::span<const ViewMatrix> views, std::span<const std::vector<double>> grid,
                                        std::span<const CandidatePair> pairs, const LabelSet& labels,
                                        const WgccaOptions& base, double threshold);

}  // namespace npsac
