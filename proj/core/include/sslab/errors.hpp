#pragma once

#include <stdexcept>
#include <string>

namespace sslab {

enum class ErrorKind {
  InvalidModel,
  DimensionMismatch,
  NonHermitian,
  InconsistentGram,
  SingularResolvent,
  IllConditioned,
  DegenerateGenerator,
  DegenerateProjection,
  NumericOverflow,
  ConfigParse,
  ConfigSemantic,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sslab
