#include "npsac/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "npsac/error.hpp"
#include "npsac/text.hpp"

namespace npsac {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
  return in;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, source + " line " + std::to_string(line) + ": " + what);
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

json parse_json_line(const std::string& line, const std::string& source, std::size_t lineno) {
  if (!is_valid_utf8(line)) parse_fail(source, lineno, "invalid UTF-8");
  try {
    json j = json::parse(line);
    if (!j.is_object()) parse_fail(source, lineno, "expected a JSON object");
    return j;
  } catch (const json::exception& e) {
    parse_fail(source, lineno, e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& source, std::size_t lineno) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(source, lineno, std::string("missing key '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& source, std::size_t lineno) {
  const json& v = field(obj, key, source, lineno);
  if (!v.is_string()) parse_fail(source, lineno, std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

bool bool_field(const json& obj, const char* key, const std::string& source, std::size_t lineno) {
  const json& v = field(obj, key, source, lineno);
  if (!v.is_boolean()) parse_fail(source, lineno, std::string("key '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::int64_t count_field(const json& obj, const char* key, const std::string& source, std::size_t lineno) {
  const json& v = field(obj, key, source, lineno);
  if (!v.is_number_integer()) parse_fail(source, lineno, std::string("key '") + key + "' must be an integer");
  const auto value = v.get<std::int64_t>();
  if (value < 0)
    throw Error(Errc::ValidationError,
                source + " line " + std::to_string(lineno) + ": '" + key + "' is negative");
  return value;
}

AccountId id_field(const json& obj, const char* key, const std::string& source, std::size_t lineno) {
  std::string s = string_field(obj, key, source, lineno);
  if (s.empty()) parse_fail(source, lineno, std::string("key '") + key + "' is empty");
  return AccountId(std::move(s));
}

constexpr const char* kAccountKeys[] = {
    "id",           "screen_name",    "username",       "description",    "location",
    "url_present",  "default_profile_image", "default_profile_background", "created_at",
    "friend_count", "follower_count", "favorite_count", "tweet_count",    "list_count"};

constexpr const char* kPostKeys[] = {"post_id", "author", "text"};

template <std::size_t N>
void require_exact_keys(const json& obj, const char* const (&keys)[N], const std::string& source,
                        std::size_t lineno) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* k) { return it.key() == k; }) ==
        std::end(keys))
      parse_fail(source, lineno, "unexpected key '" + it.key() + "'");
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") != std::string::npos)
    throw Error(Errc::ValidationError, "id '" + s + "' cannot be written to CSV");
  return s;
}

// Reads a CSV with the given header; returns the split data rows.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, std::string_view header,
                                               std::size_t columns) {
  auto in = open_input(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  const std::string source = path.string();
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (lineno == 1) {
      if (line != header) parse_fail(source, lineno, "expected header '" + std::string(header) + "'");
      continue;
    }
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != columns)
      parse_fail(source, lineno, "expected " + std::to_string(columns) + " columns");
    std::vector<std::string> row;
    for (auto p : parts) row.emplace_back(trim(p));
    rows.push_back(std::move(row));
  }
  if (lineno == 0) parse_fail(source, 1, "missing header");
  return rows;
}

}  // namespace

std::vector<Account> parse_accounts(std::istream& in, const std::string& source) {
  std::vector<Account> accounts;
  std::set<AccountId> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (trim(line).empty()) continue;
    const json j = parse_json_line(line, source, lineno);
    require_exact_keys(j, kAccountKeys, source, lineno);
    Account a;
    a.id = id_field(j, "id", source, lineno);
    a.screen_name = string_field(j, "screen_name", source, lineno);
    a.username = string_field(j, "username", source, lineno);
    a.description = string_field(j, "description", source, lineno);
    a.location = string_field(j, "location", source, lineno);
    a.url_present = bool_field(j, "url_present", source, lineno);
    a.default_profile_image = bool_field(j, "default_profile_image", source, lineno);
    a.default_profile_background = bool_field(j, "default_profile_background", source, lineno);
    try {
      a.created_at = parse_rfc3339(string_field(j, "created_at", source, lineno));
    } catch (const Error& e) {
      parse_fail(source, lineno, e.what());
    }
    a.friend_count = count_field(j, "friend_count", source, lineno);
    a.follower_count = count_field(j, "follower_count", source, lineno);
    a.favorite_count = count_field(j, "favorite_count", source, lineno);
    a.tweet_count = count_field(j, "tweet_count", source, lineno);
    a.list_count = count_field(j, "list_count", source, lineno);
    if (!seen.insert(a.id).second)
      throw Error(Errc::DuplicateId, source + " line " + std::to_string(lineno) + ": duplicate id '" + a.id.str() + "'");
    accounts.push_back(std::move(a));
  }
  std::sort(accounts.begin(), accounts.end(), [](const Account& x, const Account& y) { return x.id < y.id; });
  return accounts;
}

std::vector<Account> load_accounts(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_accounts(in, path.string());
}

LoadedEdges parse_edges(std::istream& in, EdgeKind kind, const std::string& source) {
  LoadedEdges result;
  result.edges.kind = kind;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (trim(line).empty()) continue;
    if (!is_valid_utf8(line)) parse_fail(source, lineno, "invalid UTF-8");
    const auto parts = split(line, ',');
    if (parts.size() != 2) parse_fail(source, lineno, "expected 2 columns, got " + std::to_string(parts.size()));
    const auto src = trim(parts[0]);
    const auto dst = trim(parts[1]);
    if (src.empty() || dst.empty()) parse_fail(source, lineno, "empty id");
    if (src == dst) {
      ++result.dropped_self_loops;
      continue;
    }
    result.edges.edges.emplace_back(AccountId(std::string(src)), AccountId(std::string(dst)));
  }
  auto& e = result.edges.edges;
  std::sort(e.begin(), e.end());
  const auto before = e.size();
  e.erase(std::unique(e.begin(), e.end()), e.end());
  result.duplicates = before - e.size();
  return result;
}

LoadedEdges load_edges(const std::filesystem::path& path, EdgeKind kind) {
  auto in = open_input(path);
  return parse_edges(in, kind, path.string());
}

LoadedPosts parse_posts(std::istream& in, std::span<const Account> accounts, const std::string& source) {
  std::set<AccountId> known;
  for (const auto& a : accounts) known.insert(a.id);
  LoadedPosts result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (trim(line).empty()) continue;
    const json j = parse_json_line(line, source, lineno);
    require_exact_keys(j, kPostKeys, source, lineno);
    Post p;
    p.post_id = string_field(j, "post_id", source, lineno);
    if (p.post_id.empty()) parse_fail(source, lineno, "empty post_id");
    p.author = id_field(j, "author", source, lineno);
    p.text = string_field(j, "text", source, lineno);
    if (!known.contains(p.author)) {
      ++result.dropped_unknown_author;
      continue;
    }
    result.posts.push_back(std::move(p));
  }
  return result;
}

LoadedPosts load_posts(const std::filesystem::path& path, std::span<const Account> accounts) {
  auto in = open_input(path);
  return parse_posts(in, accounts, path.string());
}

VectorTable parse_vectors(std::istream& in, const std::string& source) {
  VectorTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (lineno == 1) {
      constexpr std::string_view prefix = "#dim=";
      if (!line.starts_with(prefix)) parse_fail(source, lineno, "expected '#dim=<d>' header");
      long long dim = 0;
      try {
        dim = parse_int(std::string_view(line).substr(prefix.size()));
      } catch (const Error&) {
        parse_fail(source, lineno, "bad dimension");
      }
      if (dim <= 0) parse_fail(source, lineno, "dimension must be positive");
      table.dim = static_cast<std::size_t>(dim);
      continue;
    }
    if (trim(line).empty()) continue;
    if (!is_valid_utf8(line)) parse_fail(source, lineno, "invalid UTF-8");
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) parse_fail(source, lineno, "expected '<key>\\t<values>'");
    std::string key = line.substr(0, tab);
    std::vector<double> values;
    values.reserve(table.dim);
    std::istringstream tokens(line.substr(tab + 1));
    std::string tok;
    while (tokens >> tok) {
      double v = 0.0;
      try {
        v = parse_double(tok);
      } catch (const Error&) {
        parse_fail(source, lineno, "bad value '" + tok + "'");
      }
      if (!std::isfinite(v))
        throw Error(Errc::ValidationError, source + " line " + std::to_string(lineno) + ": non-finite value");
      values.push_back(v);
    }
    if (values.size() != table.dim)
      throw Error(Errc::DimensionMismatch, source + " line " + std::to_string(lineno) + ": " +
                                               std::to_string(values.size()) + " values, expected " +
                                               std::to_string(table.dim));
    if (!table.rows.emplace(std::move(key), std::move(values)).second)
      throw Error(Errc::DuplicateId, source + " line " + std::to_string(lineno) + ": duplicate key");
  }
  if (lineno == 0) parse_fail(source, 1, "missing '#dim=<d>' header");
  return table;
}

VectorTable load_vectors(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_vectors(in, path.string());
}

void write_accounts(std::ostream& out, std::span<const Account> accounts) {
  for (const auto& a : accounts) {
    json j = json::object();
    j["id"] = a.id.str();
    j["screen_name"] = a.screen_name;
    j["username"] = a.username;
    j["description"] = a.description;
    j["location"] = a.location;
    j["url_present"] = a.url_present;
    j["default_profile_image"] = a.default_profile_image;
    j["default_profile_background"] = a.default_profile_background;
    j["created_at"] = format_rfc3339(a.created_at);
    j["friend_count"] = a.friend_count;
    j["follower_count"] = a.follower_count;
    j["favorite_count"] = a.favorite_count;
    j["tweet_count"] = a.tweet_count;
    j["list_count"] = a.list_count;
    out << j.dump() << '\n';
  }
}

void write_posts(std::ostream& out, std::span<const Post> posts) {
  for (const auto& p : posts) {
    json j = json::object();
    j["post_id"] = p.post_id;
    j["author"] = p.author.str();
    j["text"] = p.text;
    out << j.dump() << '\n';
  }
}

void write_edges(std::ostream& out, const EdgeSet& edges) {
  for (const auto& [s, d] : edges.edges) out << csv_field(s.str()) << ',' << csv_field(d.str()) << '\n';
}

void write_vectors(std::ostream& out, const VectorTable& table) {
  out << "#dim=" << table.dim << '\n';
  for (const auto& [key, values] : table.rows) {
    out << key << '\t';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ' ';
      out << format_double(values[i]);
    }
    out << '\n';
  }
}

void write_view(std::ostream& out, const ViewMatrix& view) {
  validate(view);
  out << "#dim=" << view.data.cols() << '\n';
  for (std::size_t r = 0; r < view.order.size(); ++r) {
    out << view.order[r].str() << '\t';
    for (Eigen::Index c = 0; c < view.data.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(view.data(static_cast<Eigen::Index>(r), c));
    }
    out << '\n';
  }
}

ViewMatrix view_from_table(const VectorTable& table, std::string name) {
  ViewMatrix view;
  view.view_name = std::move(name);
  view.data.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(table.dim));
  Eigen::Index r = 0;
  for (const auto& [key, values] : table.rows) {
    view.order.emplace_back(key);
    for (std::size_t c = 0; c < values.size(); ++c) view.data(r, static_cast<Eigen::Index>(c)) = values[c];
    ++r;
  }
  return view;
}

ViewMatrix read_view(const std::filesystem::path& path) {
  return view_from_table(load_vectors(path), path.stem().string());
}

void write_pairs(std::ostream& out, std::span<const CandidatePair> pairs) {
  out << "id_a,id_b,name_similarity\n";
  for (const auto& p : pairs)
    out << csv_field(p.a.str()) << ',' << csv_field(p.b.str()) << ',' << format_double(p.name_similarity) << '\n';
}

std::vector<CandidatePair> load_pairs(const std::filesystem::path& path) {
  std::vector<CandidatePair> pairs;
  for (auto& row : read_csv(path, "id_a,id_b,name_similarity", 3)) {
    CandidatePair p;
    p.a = AccountId(row[0]);
    p.b = AccountId(row[1]);
    p.name_similarity = parse_double(row[2]);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void write_verdicts(std::ostream& out, std::span<const CandidatePair> pairs) {
  out << "id_a,id_b,score,verdict\n";
  for (const auto& p : pairs) {
    if (!p.score || !p.verdict)
      throw Error(Errc::MissingVerdict, "pair " + p.a.str() + "," + p.b.str() + " has no verdict");
    out << csv_field(p.a.str()) << ',' << csv_field(p.b.str()) << ',' << format_double(*p.score) << ','
        << to_string(*p.verdict) << '\n';
  }
}

std::vector<CandidatePair> load_verdicts(const std::filesystem::path& path) {
  std::vector<CandidatePair> pairs;
  for (auto& row : read_csv(path, "id_a,id_b,score,verdict", 4)) {
    CandidatePair p;
    p.a = AccountId(row[0]);
    p.b = AccountId(row[1]);
    p.score = parse_double(row[2]);
    p.verdict = parse_verdict(row[3]);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void write_labels(std::ostream& out, std::span<const PairKey> labels) {
  out << "id_victim,id_clone\n";
  for (const auto& [victim, clone] : labels) out << csv_field(victim.str()) << ',' << csv_field(clone.str()) << '\n';
}

LabelSet load_labels(const std::filesystem::path& path) {
  LabelSet labels;
  for (auto& row : read_csv(path, "id_victim,id_clone", 2))
    labels.insert(unordered_key(AccountId(row[0]), AccountId(row[1])));
  return labels;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error(Errc::IoError, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "cannot rename into '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace npsac
