#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "npsac/model.hpp"

namespace testing {

inline npsac::Account account(const std::string& id, const std::string& screen = "", const std::string& user = "") {
  npsac::Account a;
  a.id = npsac::AccountId(id);
  a.screen_name = screen.empty() ? id : screen;
  a.username = user.empty() ? a.screen_name : user;
  a.created_at = npsac::parse_rfc3339("2020-01-01T00:00:00Z");
  return a;
}

inline npsac::AccountId id(const std::string& s) { return npsac::AccountId(s); }

/// Fresh directory under the build tree's temp area, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(std::filesystem::temp_directory_path() / ("npsac_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

}  // namespace testing
