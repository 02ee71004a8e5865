#pragma once

#include <stdexcept>
#include <string>

namespace npsac {

enum class Errc {
  EmptyDataset,
  ParseError,
  DuplicateId,
  ValidationError,
  DimensionMismatch,
  MissingVector,
  DeadEnd,
  EmptyCorpus,
  OrderMismatch,
  InvalidWeights,
  RankError,
  UnknownAccount,
  InvalidClock,
  InvalidConfig,
  MissingVerdict,
  IoError,
};

const char* to_string(Errc code) noexcept;

// Every library failure is reported through this type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace npsac
