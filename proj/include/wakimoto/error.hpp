#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wakimoto {

enum class ErrorCode {
  UndeterminedCoefficient,
  ModuleMismatch,
  MissingCap,
  CriticalLevel,
  NotCritical,
  Unsupported,
  WindowTooSmall,
  NotEigenvector,
  ConfigInvalid,
  UnknownCheck,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Engine failure tagged with a machine-readable code and the operation that raised it.
class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorCode code, std::string operation, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorCode code_;
  std::string operation_;
};

}  // namespace wakimoto
