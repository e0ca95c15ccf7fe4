#include "crhull/error.hpp"

namespace crhull {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Arity: return "arity-mismatch";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::NonHyperbolic: return "non-hyperbolic";
    case ErrorCode::SingularJacobian: return "singular-jacobian";
    case ErrorCode::DegenerateJet: return "degenerate-jet";
    case ErrorCode::OffLocus: return "off-locus";
    case ErrorCode::BranchDomain: return "branch-domain";
    case ErrorCode::OrderTwoViolation: return "order-two-in-w-violation";
    case ErrorCode::NotFlat: return "not-flat";
    case ErrorCode::IllConditioned: return "ill-conditioned";
    case ErrorCode::Schema: return "schema";
  }
  return "unknown";
}

}  // namespace crhull
