#include "npsac/config.hpp"

#include "npsac/error.hpp"
#include "npsac/ingest.hpp"
#include "npsac/text.hpp"

namespace npsac {

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw Error(Errc::InvalidConfig, "expected key = value, got '" + std::string(text) + "'");
  const auto key = trim(text.substr(0, eq));
  if (key.empty()) throw Error(Errc::InvalidConfig, "empty key in '" + std::string(text) + "'");
  return {std::string(key), std::string(trim(text.substr(eq + 1)))};
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
  KeyValueConfig cfg;
  std::size_t lineno = 0;
  for (auto line : split(text, '\n')) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      auto [k, v] = parse_assignment(line);
      cfg.set(std::move(k), std::move(v));
    } catch (const Error& e) {
      throw Error(Errc::InvalidConfig, source + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

void KeyValueConfig::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

bool KeyValueConfig::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::string KeyValueConfig::get_string(std::string_view key, std::string fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

namespace {

template <typename F>
auto typed(const std::map<std::string, std::string, std::less<>>& entries, std::string_view key, F&& convert)
    -> decltype(convert(std::string_view{})) {
  auto it = entries.find(key);
  try {
    return convert(it->second);
  } catch (const Error&) {
    throw Error(Errc::InvalidConfig, "bad value for '" + std::string(key) + "': '" + it->second + "'");
  }
}

}  // namespace

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  if (!has(key)) return fallback;
  return typed(entries_, key, [](std::string_view v) { return parse_double(v); });
}

long long KeyValueConfig::get_int(std::string_view key, long long fallback) const {
  if (!has(key)) return fallback;
  return typed(entries_, key, [](std::string_view v) { return parse_int(v); });
}

std::size_t KeyValueConfig::get_size(std::string_view key, std::size_t fallback) const {
  const long long v = get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw Error(Errc::InvalidConfig, "'" + std::string(key) + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(Errc::InvalidConfig, "bad boolean for '" + std::string(key) + "': '" + v + "'");
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::vector<double> KeyValueConfig::get_doubles(std::string_view key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  return typed(entries_, key, [](std::string_view v) { return parse_double_list(v); });
}

}  // namespace npsac
