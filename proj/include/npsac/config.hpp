#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace npsac {

/// Plain "key = value" file; '#' starts a comment, blank lines are ignored.
/// Later assignments override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  bool has(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  std::size_t get_size(std::string_view key, std::size_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<double> get_doubles(std::string_view key, std::vector<double> fallback) const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// "key=value" -> (key, value); InvalidConfig without '='.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

std::vector<double> parse_double_list(std::string_view text);

}  // namespace npsac
