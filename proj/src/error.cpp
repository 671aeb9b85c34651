#include "wakimoto/error.hpp"

namespace wakimoto {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UndeterminedCoefficient: return "UNDETERMINED_COEFFICIENT";
    case ErrorCode::ModuleMismatch: return "MODULE_MISMATCH";
    case ErrorCode::MissingCap: return "MISSING_CAP";
    case ErrorCode::CriticalLevel: return "CRITICAL_LEVEL";
    case ErrorCode::NotCritical: return "NOT_CRITICAL";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::WindowTooSmall: return "WINDOW_TOO_SMALL";
    case ErrorCode::NotEigenvector: return "NOT_EIGENVECTOR";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::UnknownCheck: return "UNKNOWN_CHECK";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

EngineError::EngineError(ErrorCode code, std::string operation, const std::string& detail)
    : std::runtime_error(std::string(error_code_name(code)) + " in " + operation + ": " + detail),
      code_(code),
      operation_(std::move(operation)) {}

}  // namespace wakimoto
