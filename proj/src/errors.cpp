#include "ptstring/errors.hpp"

namespace ptstring {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Singularity: return "singularity";
    case ErrorCode::Quadrature: return "quadrature";
    case ErrorCode::IllConditioned: return "ill_conditioned";
    case ErrorCode::SingularPencil: return "singular_pencil";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::NoTransition: return "no_transition";
    case ErrorCode::NoSingularity: return "no_singularity";
    case ErrorCode::NegativeSumRule: return "negative_sum_rule";
    case ErrorCode::TruncationMismatch: return "truncation_mismatch";
    case ErrorCode::NonConvergence: return "non_convergence";
    case ErrorCode::DegenerateData: return "degenerate_data";
    case ErrorCode::WrongBranch: return "wrong_branch";
    case ErrorCode::BranchInconsistency: return "branch_inconsistency";
    case ErrorCode::DensityZero: return "density_zero";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

}  // namespace ptstring
