#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "npsac/model.hpp"

namespace npsac {

/// Externally produced vectors keyed by post id or account id.
struct VectorTable {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> rows;

  friend bool operator==(const VectorTable&, const VectorTable&) = default;
};

struct LoadedEdges {
  EdgeSet edges;
  std::size_t dropped_self_loops = 0;
  std::size_t duplicates = 0;
};

struct LoadedPosts {
  std::vector<Post> posts;
  std::size_t dropped_unknown_author = 0;
};

// Stream parsers take a source name for error messages. File loaders wrap
// them and raise IoError when the file cannot be opened.

/// Accounts sorted by id. ParseError carries the 1-based line number.
std::vector<Account> parse_accounts(std::istream& in, const std::string& source = "<stream>");
std::vector<Account> load_accounts(const std::filesystem::path& path);

LoadedEdges parse_edges(std::istream& in, EdgeKind kind, const std::string& source = "<stream>");
LoadedEdges load_edges(const std::filesystem::path& path, EdgeKind kind);

/// Posts by authors outside `accounts` are dropped and counted.
LoadedPosts parse_posts(std::istream& in, std::span<const Account> accounts, const std::string& source = "<stream>");
LoadedPosts load_posts(const std::filesystem::path& path, std::span<const Account> accounts);

VectorTable parse_vectors(std::istream& in, const std::string& source = "<stream>");
VectorTable load_vectors(const std::filesystem::path& path);

void write_accounts(std::ostream& out, std::span<const Account> accounts);
void write_posts(std::ostream& out, std::span<const Post> posts);
void write_edges(std::ostream& out, const EdgeSet& edges);
void write_vectors(std::ostream& out, const VectorTable& table);

/// A view stored as vectors.tsv keyed by account id, rows in view order.
void write_view(std::ostream& out, const ViewMatrix& view);
ViewMatrix read_view(const std::filesystem::path& path);
ViewMatrix view_from_table(const VectorTable& table, std::string name);

// CSV artifacts passed between CLI stages; each starts with a header line.
void write_pairs(std::ostream& out, std::span<const CandidatePair> pairs);
std::vector<CandidatePair> load_pairs(const std::filesystem::path& path);
void write_verdicts(std::ostream& out, std::span<const CandidatePair> pairs);
std::vector<CandidatePair> load_verdicts(const std::filesystem::path& path);
void write_labels(std::ostream& out, std::span<const PairKey> labels);
LabelSet load_labels(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace npsac
