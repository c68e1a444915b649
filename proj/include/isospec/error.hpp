#pragma once

#include <stdexcept>
#include <string>

namespace isospec {

// Values mirror isospec_status in isospec.h.
enum class ErrorCode : int {
  invalid_argument = 1,
  io = 2,
  parse = 3,
  bracket_not_found = 4,
  no_convergence = 5,
  overflow = 6,
  not_eigenvalue = 7,
  spectrum_mismatch = 8,
  length_mismatch = 9,
  nonpositive_weight = 10,
  pole = 11,
  conditioning = 12,
  extrapolation_diverged = 13,
  grid_mismatch = 14,
  nonpositive_determinant = 15,
  truncation = 16,
  provenance_mismatch = 17,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace isospec
