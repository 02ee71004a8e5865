#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "npsac/model.hpp"

namespace npsac {

/// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// 1 - editdist / max(|s1|, |s2|) on case-folded code points; both empty -> 1.
double name_similarity(std::string_view s1, std::string_view s2);

struct PairGenOptions {
  double threshold = 0.8;
  /// Only compare names whose first folded character matches. Inexact.
  bool block_first_char = false;
  unsigned threads = 1;
};

/// Every unordered pair whose screen names or usernames (compared field to
/// same field) reach the threshold. Sorted by (a, b) with a < b.
std::vector<CandidatePair> generate_pairs(std::span<const Account> accounts, const PairGenOptions& options = {});

}  // namespace npsac
