#include "holobench/error.hpp"

namespace holo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::OracleScaleExceeded: return "oracle-scale-exceeded";
    case ErrorKind::Underdetermined: return "underdetermined";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::ModelError: return "model-error";
    case ErrorKind::BuildRejected: return "build-rejected";
    case ErrorKind::CostGuard: return "cost-guard";
    case ErrorKind::SchemaMismatch: return "schema-mismatch";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace holo
