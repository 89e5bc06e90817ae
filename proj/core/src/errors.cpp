#include "sslab/errors.hpp"

namespace sslab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NonHermitian: return "non-hermitian";
    case ErrorKind::InconsistentGram: return "inconsistent-gram";
    case ErrorKind::SingularResolvent: return "singular-resolvent";
    case ErrorKind::IllConditioned: return "ill-conditioned-construction";
    case ErrorKind::DegenerateGenerator: return "degenerate-generator";
    case ErrorKind::DegenerateProjection: return "degenerate-projection";
    case ErrorKind::NumericOverflow: return "numeric-overflow";
    case ErrorKind::ConfigParse: return "config-parse";
    case ErrorKind::ConfigSemantic: return "config-semantic";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace sslab
