#include "npsac/eval.hpp"

#include <algorithm>
#include <cmath>

#include "npsac/error.hpp"
#include "npsac/predict.hpp"
#include "npsac/text.hpp"

namespace npsac {

Confusion confusion(std::span<const CandidatePair> verdicts, const LabelSet& labels) {
  Confusion c;
  for (const auto& p : verdicts) {
    if (!p.verdict) throw Error(Errc::MissingVerdict, "pair " + p.a.str() + "," + p.b.str() + " has no verdict");
    const bool positive = *p.verdict == Verdict::ClonePair;
    const bool truth = labels.contains(unordered_key(p.a, p.b));
    if (positive && truth) ++c.tp;
    else if (positive) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

std::size_t labels_outside(std::span<const CandidatePair> pairs, const LabelSet& labels) {
  LabelSet seen;
  for (const auto& p : pairs) seen.insert(unordered_key(p.a, p.b));
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [&](const PairKey& k) { return !seen.contains(k); }));
}

Metrics metrics_from_rates(double precision, double recall) {
  Metrics m;
  m.precision = precision;
  m.recall = recall;
  m.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  m.f2 = 4.0 * precision + recall > 0.0 ? 5.0 * precision * recall / (4.0 * precision + recall) : 0.0;
  return m;
}

Metrics metrics(const Confusion& c) {
  const double p = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  const double r = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  return metrics_from_rates(p, r);
}

std::vector<SweepRow> threshold_sweep(std::span<const CandidatePair> scored, const LabelSet& labels,
                                      std::span<const double> grid) {
  if (grid.empty()) throw Error(Errc::InvalidConfig, "threshold grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error(Errc::InvalidConfig, "threshold grid must be ascending");
  std::vector<CandidatePair> work(scored.begin(), scored.end());
  for (const auto& p : work)
    if (!p.score) throw Error(Errc::MissingVerdict, "pair " + p.a.str() + "," + p.b.str() + " has no score");
  std::vector<SweepRow> rows;
  for (double t : grid) {
    SweepRow row;
    row.threshold = t;
    for (auto& p : work) {
      p.verdict = apply_threshold(*p.score, t);
      row.predicted_positive += *p.verdict == Verdict::ClonePair;
    }
    row.confusion = confusion(work, labels);
    row.metrics = metrics(row.confusion);
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw Error(Errc::InvalidConfig, "grid must be 'lo:hi:step'");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const double step = parse_double(parts[2]);
  if (!(step > 0.0) || hi < lo) throw Error(Errc::InvalidConfig, "grid needs step > 0 and hi >= lo");
  std::vector<double> grid;
  // Points are lo + i*step, rounded to 12 decimals so 0.1:0.9:0.1 yields 0.3, not 0.30000000000000004.
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + 0.5 * step) break;
    grid.push_back(std::round(v * 1e12) / 1e12);
  }
  return grid;
}

std::vector<std::vector<double>> weight_grid(std::size_t views, std::span<const double> levels) {
  if (views == 0 || levels.empty()) throw Error(Errc::InvalidConfig, "weight grid needs views and levels");
  std::vector<std::vector<double>> grid;
  std::vector<std::size_t> digit(views, 0);
  while (true) {
    std::vector<double> w(views);
    for (std::size_t i = 0; i < views; ++i) w[i] = levels[digit[i]];
    grid.push_back(std::move(w));
    std::size_t pos = views;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < levels.size()) break;
      digit[pos] = 0;
      if (pos == 0) return grid;
    }
  }
}

std::vector<GridRow> weight_grid_search(std::span<const ViewMatrix> views, std::span<const std::vector<double>> grid,
                                        std::span<const CandidatePair> pairs, const LabelSet& labels,
                                        const WgccaOptions& base, double threshold) {
  std::vector<GridRow> rows;
  for (const auto& w : grid) {
    WgccaOptions options = base;
    options.weights = w;
    const FusedEmbedding fused = wgcca_fit(views, options);
    const auto scored = classify_pairs(pairs, EmbeddingTable(fused), threshold);
    GridRow row;
    row.weights = w;
    row.confusion = confusion(scored, labels);
    row.metrics = metrics(row.confusion);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) { return a.metrics.f1 > b.metrics.f1; });
  return rows;
}

}  // namespace npsac
