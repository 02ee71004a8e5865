#include "npsac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "npsac/error.hpp"
#include "npsac/ingest.hpp"
#include "npsac/pairgen.hpp"
#include "npsac/rng.hpp"

namespace npsac {

namespace {

constexpr const char* kSyllables[] = {"ka", "lo", "mi", "ra", "ten", "zu", "be", "no", "sha", "vi", "dor", "el",
                                      "ta", "qui", "mon", "ar", "fe", "li", "go", "sen", "pa", "ri", "jo", "wen",
                                      "ha", "ce", "du", "ly", "mar", "tis", "ob", "ni"};
constexpr const char* kFirst[] = {"Alex", "Sam", "Jordan", "Taylor", "Morgan", "Casey", "Riley", "Jamie",
                                  "Avery", "Quinn", "Robin", "Drew", "Elliot", "Harper", "Kai", "Noor",
                                  "Priya", "Mateo", "Yuki", "Lena", "Omar", "Ines", "Tomas", "Zara"};
constexpr const char* kLast[] = {"Smith", "Garcia", "Chen", "Okafor", "Novak", "Silva", "Kim", "Haddad",
                                 "Larsen", "Rossi", "Nguyen", "Patel", "Dubois", "Moreau", "Kowalski", "Tanaka",
                                 "Ibrahim", "Costa", "Fischer", "Murphy", "Lopez", "Ahmed", "Berg", "Ward"};
constexpr const char* kCities[] = {"Melbourne", "Sydney", "Lagos", "Lisbon", "Osaka", "Toronto", "Berlin",
                                   "Nairobi", "Lima", "Seoul", "Austin", "Dublin", ""};

template <std::size_t N>
const char* pick(const char* const (&items)[N], Rng& rng) {
  return items[rng.index(N)];
}

std::string make_word(Rng& rng) {
  std::string w;
  const std::size_t parts = 2 + rng.index(2);
  for (std::size_t i = 0; i < parts; ++i) w += pick(kSyllables, rng);
  return w;
}

std::string make_handle(Rng& rng) {
  std::string h;
  while (h.size() < 7) h += pick(kSyllables, rng);
  if (rng.bernoulli(0.5)) h += '_';
  h += pick(kSyllables, rng);
  if (rng.bernoulli(0.5)) h += std::to_string(rng.index(100));
  return h;
}

char lookalike(char c, Rng& rng) {
  switch (c) {
    case 'o': return '0';
    case 'l': return '1';
    case 'i': return 'l';
    case 'e': return '3';
    case 's': return '5';
    case 'a': return '4';
    default: return static_cast<char>('a' + rng.index(26));
  }
}

// At most floor(0.2 * len) edits so the edited name stays >= 0.8 similar.
std::string edit_name(const std::string& name, double noise, Rng& rng, bool require_change) {
  const std::size_t cap = name.size() / 5;
  std::size_t edits = static_cast<std::size_t>(std::floor(noise * static_cast<double>(name.size())));
  edits = std::min(edits, cap);
  if (require_change) edits = std::max<std::size_t>(edits, std::min<std::size_t>(1, cap));
  std::string out = name;
  for (std::size_t e = 0; e < edits && !out.empty(); ++e) {
    const std::size_t pos = rng.index(out.size());
    const double op = rng.uniform();
    if (op < 0.6) {
      const char repl = lookalike(out[pos], rng);
      out[pos] = repl == out[pos] ? static_cast<char>(repl == 'x' ? 'y' : 'x') : repl;
    } else if (op < 0.8) {
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), '_');
    } else if (out.size() > 1) {
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
    }
  }
  return out;
}

std::string make_post(const std::vector<std::string>& personal, const std::vector<std::string>& topic,
                      const std::vector<std::string>& vocab, Rng& rng) {
  std::string text;
  const std::size_t words = 8 + rng.index(9);
  for (std::size_t i = 0; i < words; ++i) {
    const double u = rng.uniform();
    const auto& source = u < 0.6 ? personal : (u < 0.9 ? topic : vocab);
    if (i) text += ' ';
    text += source[rng.index(source.size())];
  }
  return text;
}

std::string perturb_post(const std::string& text, double noise, const std::vector<std::string>& vocab, Rng& rng) {
  std::istringstream in(text);
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    out += rng.bernoulli(noise) ? vocab[rng.index(vocab.size())] : word;
  }
  return out;
}

std::int64_t jitter(std::int64_t value, double noise, Rng& rng) {
  const double f = 1.0 + noise * rng.uniform(-1.0, 1.0);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::llround(static_cast<double>(value) * f)));
}

std::int64_t heavy_tailed(double log_mean, double log_sd, Rng& rng) {
  return static_cast<std::int64_t>(std::floor(std::exp(log_mean + log_sd * rng.normal())));
}


struct EdgeBuilder {
  std::set<std::pair<std::size_t, std::size_t>> directed;
  void add(std::size_t s, std::size_t d) {
    if (s != d) directed.emplace(s, d);
  }
  std::set<std::size_t> neighbors(std::size_t v) const {
    std::set<std::size_t> out;
    for (const auto& [s, d] : directed) {
      if (s == v) out.insert(d);
      if (d == v) out.insert(s);
    }
    return out;
  }
};

}  // namespace

Dataset synth_generate(const SynthConfig& cfg) {
  if (!(cfg.clone_rate > 0.0 && cfg.clone_rate < 1.0)) throw Error(Errc::InvalidConfig, "clone_rate must lie in (0, 1)");
  if (!(cfg.noise >= 0.0 && cfg.noise <= 1.0)) throw Error(Errc::InvalidConfig, "noise must lie in [0, 1]");
  if (cfg.n_accounts < 2) throw Error(Errc::InvalidConfig, "need at least two accounts");
  if (cfg.community_size == 0) throw Error(Errc::InvalidConfig, "community_size must be positive");
  const auto n_clones = static_cast<std::size_t>(std::llround(static_cast<double>(cfg.n_accounts) * cfg.clone_rate));
  if (n_clones == 0) throw Error(Errc::InvalidConfig, "clone_rate yields no clone pairs");
  const auto n_lookalike = static_cast<std::size_t>(std::llround(static_cast<double>(cfg.n_accounts) * cfg.lookalike_rate));
  if (n_clones + 2 * n_lookalike > cfg.n_accounts)
    throw Error(Errc::InvalidConfig, "too many clones and look-alikes for the account count");

  Rng rng(cfg.seed);
  Dataset ds;
  ds.now = parse_rfc3339(cfg.now);
  const std::size_t n = cfg.n_accounts;
  const std::size_t total = n + n_clones;

  // Ids: random hex, unique, so id order carries no information.
  std::vector<AccountId> ids;
  {
    std::set<std::string> used;
    while (ids.size() < total) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "u%012llx", static_cast<unsigned long long>(rng.next() & 0xFFFFFFFFFFFFULL));
      if (used.insert(buf).second) ids.emplace_back(buf);
    }
  }

  // Vocabulary, communities, personal word sets.
  std::vector<std::string> vocab;
  {
    std::set<std::string> seen;
    while (vocab.size() < 2000) {
      auto w = make_word(rng);
      if (seen.insert(w).second) vocab.push_back(std::move(w));
    }
  }
  const std::size_t n_comm = std::max<std::size_t>(1, (n + cfg.community_size / 2) / cfg.community_size);
  std::vector<std::size_t> community(total);
  {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    for (std::size_t i = 0; i < n; ++i) community[perm[i]] = i % n_comm;
  }
  std::vector<std::vector<std::string>> topics(n_comm);
  for (auto& t : topics)
    for (std::size_t i = 0; i < 60; ++i) t.push_back(vocab[rng.index(vocab.size())]);
  std::vector<std::vector<std::string>> personal(n);
  for (auto& p : personal)
    for (std::size_t i = 0; i < 25; ++i) p.push_back(vocab[rng.index(vocab.size())]);

  // Originals.
  std::vector<Account> accounts(total);
  std::vector<std::vector<std::string>> texts(total);
  const std::int64_t now_days =
      std::chrono::floor<std::chrono::days>(ds.now).time_since_epoch().count();
  for (std::size_t i = 0; i < n; ++i) {
    Account& a = accounts[i];
    a.id = ids[i];
    a.screen_name = make_handle(rng);
    a.username = std::string(pick(kFirst, rng)) + " " + pick(kLast, rng);
    if (rng.bernoulli(0.8)) {
      for (std::size_t w = 0, words = 4 + rng.index(8); w < words; ++w)
        a.description += (w ? " " : "") + personal[i][rng.index(personal[i].size())];
    }
    a.location = pick(kCities, rng);
    a.url_present = rng.bernoulli(0.4);
    a.default_profile_image = rng.bernoulli(0.1);
    a.default_profile_background = rng.bernoulli(0.2);
    const auto age_days = static_cast<std::int64_t>(30 + rng.index(3600));
    a.created_at = UtcTime{std::chrono::seconds{(now_days - age_days) * 86400 + static_cast<std::int64_t>(rng.index(86400))}};
    a.friend_count = heavy_tailed(5.0, 1.2, rng);
    a.follower_count = heavy_tailed(5.0, 1.5, rng);
    a.favorite_count = heavy_tailed(6.0, 1.5, rng);
    a.tweet_count = heavy_tailed(7.0, 1.2, rng);
    a.list_count = heavy_tailed(1.0, 1.0, rng);
    if (!rng.bernoulli(cfg.no_post_rate)) {
      for (std::size_t p = 0, count = 3 + rng.index(10); p < count; ++p)
        texts[i].push_back(make_post(personal[i], topics[community[i]], vocab, rng));
    }
  }

  // Victims and benign look-alike pairs are disjoint sets of originals.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  const std::vector<std::size_t> victims(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_clones));
  for (std::size_t k = 0; k < n_lookalike; ++k) {
    const std::size_t x = perm[n_clones + 2 * k];
    const std::size_t y = perm[n_clones + 2 * k + 1];
    accounts[y].screen_name = edit_name(accounts[x].screen_name, cfg.noise, rng, true);
    accounts[y].username = accounts[x].username;
    ds.lookalike_pairs.emplace_back(accounts[x].id, accounts[y].id);
  }

  // Social graphs over originals plus network-only hubs.
  std::vector<AccountId> hubs;
  for (std::size_t c = 0; c < n_comm; ++c)
    for (std::size_t h = 0; h < cfg.hubs_per_community; ++h) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "hub%03zu%02zu", c, h);
      hubs.emplace_back(buf);
    }
  EdgeBuilder follower, friends;
  for (EdgeBuilder* g : {&follower, &friends}) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = community[i] == community[j] ? cfg.p_intra : cfg.p_inter;
        if (!rng.bernoulli(p)) continue;
        if (rng.bernoulli(0.5)) g->add(i, j);
        else g->add(j, i);
      }
  }
  std::vector<std::pair<std::size_t, std::size_t>> hub_follows;  // (account, hub index)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < cfg.hubs_per_community; ++h)
      if (rng.bernoulli(0.5)) hub_follows.emplace_back(i, community[i] * cfg.hubs_per_community + h);

  // Clones.
  for (std::size_t c = 0; c < n_clones; ++c) {
    const std::size_t v = victims[c];
    const std::size_t k = n + c;
    community[k] = community[v];
    Account& a = accounts[k];
    const Account& src = accounts[v];
    a.id = ids[k];
    a.screen_name = edit_name(src.screen_name, cfg.noise, rng, true);
    a.username = rng.bernoulli(cfg.noise) ? edit_name(src.username, cfg.noise, rng, false) : src.username;
    a.description = src.description;
    a.location = src.location;
    a.url_present = src.url_present;
    a.default_profile_image = src.default_profile_image;
    a.default_profile_background = src.default_profile_background;
    const std::int64_t src_age = ds.now.time_since_epoch().count() - src.created_at.time_since_epoch().count();
    const std::int64_t age = jitter(src_age, cfg.noise, rng);
    a.created_at = UtcTime{std::chrono::seconds{ds.now.time_since_epoch().count() - age}};
    a.friend_count = jitter(src.friend_count, cfg.noise, rng);
    a.follower_count = jitter(src.follower_count, cfg.noise, rng);
    a.favorite_count = jitter(src.favorite_count, cfg.noise, rng);
    a.tweet_count = jitter(src.tweet_count, cfg.noise, rng);
    a.list_count = jitter(src.list_count, cfg.noise, rng);
    for (const auto& t : texts[v])
      if (rng.bernoulli(0.6)) texts[k].push_back(perturb_post(t, cfg.noise, vocab, rng));
    if (texts[k].empty() && !texts[v].empty()) texts[k].push_back(perturb_post(texts[v].front(), cfg.noise, vocab, rng));

    for (EdgeBuilder* g : {&follower, &friends}) {
      const auto nb = g->neighbors(v);
      std::size_t kept = 0;
      for (std::size_t u : nb)
        if (rng.bernoulli(cfg.neighbor_overlap)) {
          if (rng.bernoulli(0.5)) g->add(k, u);
          else g->add(u, k);
          ++kept;
        }
      // Fresh neighbors from the victim's community make up the rest.
      std::vector<std::size_t> pool;
      for (std::size_t u = 0; u < n; ++u)
        if (u != v && community[u] == community[v] && !nb.contains(u)) pool.push_back(u);
      const std::size_t want = std::max<std::size_t>(1, nb.size() > kept ? nb.size() - kept : 0);
      for (std::size_t f = 0; f < want && !pool.empty(); ++f) {
        const std::size_t pos = rng.index(pool.size());
        if (rng.bernoulli(0.5)) g->add(k, pool[pos]);
        else g->add(pool[pos], k);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pos));
      }
    }
    for (std::size_t h = 0; h < cfg.hubs_per_community; ++h)
      if (rng.bernoulli(0.5)) hub_follows.emplace_back(k, community[k] * cfg.hubs_per_community + h);
    ds.clone_pairs.emplace_back(src.id, a.id);
  }

  for (std::size_t i = 0; i < total; ++i) {
    const std::string base = accounts[i].id.str();
    for (std::size_t p = 0; p < texts[i].size(); ++p)
      ds.posts.push_back(Post{accounts[i].id, texts[i][p], base + "_p" + std::to_string(p)});
  }
  std::sort(ds.posts.begin(), ds.posts.end(), [](const Post& x, const Post& y) { return x.post_id < y.post_id; });

  auto emit = [&](const EdgeBuilder& g, EdgeSet& out, bool hubs_follow) {
    for (const auto& [s, d] : g.directed) out.edges.emplace_back(accounts[s].id, accounts[d].id);
    for (const auto& [i, h] : hub_follows) {
      if (hubs_follow) out.edges.emplace_back(hubs[h], accounts[i].id);
      else out.edges.emplace_back(accounts[i].id, hubs[h]);
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  };
  emit(follower, ds.follower, false);
  emit(friends, ds.friends, true);

  ds.accounts = std::move(accounts);
  std::sort(ds.accounts.begin(), ds.accounts.end(), [](const Account& x, const Account& y) { return x.id < y.id; });

  // Construction check: every planted pair must survive pair generation at 0.8.
  std::map<AccountId, const Account*> by_id;
  for (const auto& a : ds.accounts) by_id[a.id] = &a;
  for (const auto& [victim, clone] : ds.clone_pairs) {
    const Account& x = *by_id.at(victim);
    const Account& y = *by_id.at(clone);
    if (std::max(name_similarity(x.screen_name, y.screen_name), name_similarity(x.username, y.username)) < 0.8)
      throw Error(Errc::ValidationError, "planted pair " + victim.str() + "," + clone.str() + " fell below 0.8");
  }
  return ds;
}

LabelSet synth_labels(const Dataset& dataset) {
  LabelSet labels;
  for (const auto& [victim, clone] : dataset.clone_pairs) labels.insert(unordered_key(victim, clone));
  return labels;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  auto dump = [&](const char* name, auto&& writer) {
    std::ostringstream out;
    writer(out);
    write_file_atomic(dir / name, out.str());
  };
  dump("accounts.jsonl", [&](std::ostream& o) { write_accounts(o, ds.accounts); });
  dump("posts.jsonl", [&](std::ostream& o) { write_posts(o, ds.posts); });
  dump("edges_follower.csv", [&](std::ostream& o) { write_edges(o, ds.follower); });
  dump("edges_friend.csv", [&](std::ostream& o) { write_edges(o, ds.friends); });
  dump("labels.csv", [&](std::ostream& o) { write_labels(o, ds.clone_pairs); });
  dump("dataset.cfg", [&](std::ostream& o) { o << "now = " << format_rfc3339(ds.now) << '\n'; });
}

}  // namespace npsac
