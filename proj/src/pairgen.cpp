#include "npsac/pairgen.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "npsac/error.hpp"
#include "npsac/text.hpp"

namespace npsac {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

// (m - d) / m is a single correctly rounded division, so comparisons against
// a threshold like 0.8 behave as they would on the exact rational.
double similarity_of(std::u32string_view a, std::u32string_view b) {
  const std::size_t m = std::max(a.size(), b.size());
  if (m == 0) return 1.0;
  const std::size_t d = edit_distance(a, b);
  return static_cast<double>(m - d) / static_cast<double>(m);
}

double length_bound(std::size_t la, std::size_t lb) {
  const std::size_t m = std::max(la, lb);
  if (m == 0) return 1.0;
  const std::size_t gap = la > lb ? la - lb : lb - la;
  return static_cast<double>(m - gap) / static_cast<double>(m);
}

struct FoldedNames {
  std::u32string screen;
  std::u32string user;
};

}  // namespace

double name_similarity(std::string_view s1, std::string_view s2) {
  return similarity_of(fold_case(s1), fold_case(s2));
}

std::vector<CandidatePair> generate_pairs(std::span<const Account> accounts, const PairGenOptions& options) {
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0))
    throw Error(Errc::InvalidConfig, "pair threshold must lie in [0, 1]");

  std::vector<std::size_t> by_id(accounts.size());
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t x, std::size_t y) { return accounts[x].id < accounts[y].id; });

  std::vector<FoldedNames> names(accounts.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) {
    names[i].screen = fold_case(accounts[by_id[i]].screen_name);
    names[i].user = fold_case(accounts[by_id[i]].username);
  }

  const double t = options.threshold;
  auto field_sim = [&](const std::u32string& x, const std::u32string& y) -> double {
    if (options.block_first_char && !x.empty() && !y.empty() && x.front() != y.front()) return -1.0;
    if (length_bound(x.size(), y.size()) < t) return -1.0;
    return similarity_of(x, y);
  };

  const std::size_t n = by_id.size();
  auto scan_rows = [&](std::size_t first, std::size_t stride, std::vector<CandidatePair>& out) {
    for (std::size_t i = first; i < n; i += stride) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double sim = std::max(field_sim(names[i].screen, names[j].screen), field_sim(names[i].user, names[j].user));
        if (sim >= t) {
          CandidatePair p;
          p.a = accounts[by_id[i]].id;
          p.b = accounts[by_id[j]].id;
          p.name_similarity = sim;
          out.push_back(std::move(p));
        }
      }
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  std::vector<std::vector<CandidatePair>> parts(threads);
  if (threads == 1) {
    scan_rows(0, 1, parts[0]);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) workers.emplace_back([&, w] { scan_rows(w, threads, parts[w]); });
  }

  std::vector<CandidatePair> pairs;
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(pairs));
  std::sort(pairs.begin(), pairs.end(),
            [](const CandidatePair& x, const CandidatePair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return pairs;
}

}  // namespace npsac
