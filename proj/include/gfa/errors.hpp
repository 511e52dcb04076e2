#pragma once

#include <stdexcept>
#include <string>

namespace gfa {

// Machine-readable error codes. The CLI maps modeled outcomes
// (NoFixedPoint/Unstable/NoRealRoot/Infeasible) to exit code 2 and
// everything else to exit code 1.
enum class ErrorCode {
  ConfigError,
  NoFixedPoint,
  Unstable,
  NoRealRoot,
  GridTooCoarse,
  TableMiss,
  EmptyStats,
  InsufficientSamples,
  QuadratureError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::NoRealRoot: return "NoRealRoot";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::TableMiss: return "TableMiss";
    case ErrorCode::EmptyStats: return "EmptyStats";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::QuadratureError: return "QuadratureError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace gfa
