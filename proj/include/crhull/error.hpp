#pragma once

#include <stdexcept>
#include <string>

namespace crhull {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  Arity,
  OutOfDomain,
  NonHyperbolic,
  SingularJacobian,
  DegenerateJet,
  OffLocus,
  BranchDomain,
  OrderTwoViolation,
  NotFlat,
  IllConditioned,
  Schema,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the core; the code drives exit codes and C status mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace crhull
