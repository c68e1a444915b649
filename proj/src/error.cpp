#include "isospec/error.hpp"

namespace isospec {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::bracket_not_found: return "bracket-not-found";
    case ErrorCode::no_convergence: return "non-convergence";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::not_eigenvalue: return "not-eigenvalue";
    case ErrorCode::spectrum_mismatch: return "spectrum-mismatch";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::nonpositive_weight: return "nonpositive-weight";
    case ErrorCode::pole: return "pole";
    case ErrorCode::conditioning: return "conditioning";
    case ErrorCode::extrapolation_diverged: return "extrapolation-diverged";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::nonpositive_determinant: return "nonpositive-determinant";
    case ErrorCode::truncation: return "truncation";
    case ErrorCode::provenance_mismatch: return "provenance-mismatch";
  }
  return "unknown";
}

}  // namespace isospec
