#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmelab {

enum class ErrorCode {
  NonHermiticityPreserving,
  NotTracePreserving,
  NotHermitian,
  SingularMap,
  BranchAmbiguity,
  Defective,
  BadAxis,
  SingularRate,
  NotAGenerator,
  GridError,
  NegativeWeight,
  PoleOnPath,
  NonCommutativeFamily,
  BadCaseParams,
  UnsupportedGeometry,
  QuadratureNotConverged,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace qmelab
