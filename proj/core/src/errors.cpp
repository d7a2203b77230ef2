#include "qmelab/errors.hpp"

namespace qmelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermiticityPreserving: return "NonHermiticityPreserving";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::Defective: return "Defective";
    case ErrorCode::BadAxis: return "BadAxis";
    case ErrorCode::SingularRate: return "SingularRate";
    case ErrorCode::NotAGenerator: return "NotAGenerator";
    case ErrorCode::GridError: return "GridError";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::NonCommutativeFamily: return "NonCommutativeFamily";
    case ErrorCode::BadCaseParams: return "BadCaseParams";
    case ErrorCode::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qmelab
