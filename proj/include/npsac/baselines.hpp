#pragma once

#include <span>
#include <vector>

#include "npsac/model.hpp"
#include "npsac/network_view.hpp"

namespace npsac {

/// Basic Profile Similarity parameters; defaults are the published settings.
struct BpsParams {
  double k = 0.5;
  double x = 0.5;
  double mu = 0.0154;
  double lambda = 0.03;  // reported only; mu alone gates the verdict
  int epsilon = 13;      // number of public attributes compared
};

/// (a^2 + b^2) / sqrt(k^2 + x^2).
double bps_score(double a_sim, double b_common, const BpsParams& params = {});

/// Fraction of the 13 public attributes that match exactly (strings compared
/// case-folded).
double bps_attribute_similarity(const Account& x, const Account& y);

/// |common friends| / max degree of the pair in the friend graph; 0 when both
/// are isolated or absent.
double bps_common_friends(const Graph& friends, const AccountId& x, const AccountId& y);

struct BpsResult {
  double attribute_similarity = 0.0;
  double common_friends = 0.0;
  double score = 0.0;
  Verdict verdict = Verdict::Benign;
};

/// Cloned iff score >= mu. UnknownAccount if either id is missing from `accounts`.
BpsResult bps_classify(const CandidatePair& pair, std::span<const Account> accounts, const Graph& friends,
                       const BpsParams& params = {});

/// Pairs with score = BPS score and verdict set.
std::vector<CandidatePair> bps_classify_pairs(std::span<const CandidatePair> pairs, std::span<const Account> accounts,
                                              const Graph& friends, const BpsParams& params = {});

/// Horizontal concatenation; OrderMismatch on inconsistent orders.
ViewMatrix concat_fuse(std::span<const ViewMatrix> views);

}  // namespace npsac
