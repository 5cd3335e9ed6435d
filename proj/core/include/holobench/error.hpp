#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo {

/// Failure categories shared by every module. Callers branch on the kind,
/// the message is for humans.
enum class ErrorKind {
  InvalidArgument,
  DomainError,
  DimensionMismatch,
  OracleScaleExceeded,
  Underdetermined,
  NotApplicable,
  ModelError,
  BuildRejected,
  CostGuard,
  SchemaMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Throws Error(kind, msg) when `cond` is false.
inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace holo
