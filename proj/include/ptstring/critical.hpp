#pragma once

#include <string>
#include <vector>

#include "ptstring/density.hpp"

namespace ptstring {

enum class Branch { PositiveE, NegativeE };
std::string to_string(Branch branch);
Branch branch_from_string(const std::string& name);

/// Exceptional point where two real eigenvalues coalesce at e_c for α = alpha_c.
struct CriticalPoint {
  int index = 0;  ///< pair label within its branch, 1-based
  double alpha_c = 0.0;
  double e_c = 0.0;
  Branch branch = Branch::PositiveE;
  double log_abs_F = 0.0;   ///< log|F̂| at the solution
  double log_abs_FE = 0.0;  ///< log|∂F̂/∂E| at the solution
  int trunc_N = 0;
  bool degraded = false;  ///< Newton did not converge; bisection values reported
  int iterations = 0;
  double alpha_check = 0.0;  ///< alpha_c from the validation truncation (0 if not validated)
};

/// Eigenvalues among the first K (default ordering) with |Im E| <= 1e-8 (1 + |E|).
int count_real(const DensityModel& model, double alpha, int N, int K);

/// True when pair `pair_index` of `branch` is real at α. Positive branch: the
/// first 2n eigenvalues are all real. Negative branch: at least 2n real
/// negative eigenvalues with |E| <= 10 (truncation artifacts sit far below).
bool pair_is_real(const DensityModel& model, Branch branch, int pair_index, double alpha, int N);

struct AlphaBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bisects the pair_is_real transition to width 1e-10·max(1, α). Throws
/// NoTransition when the predicate agrees at both ends.
AlphaBracket bracket_and_bisect(const DensityModel& model, int pair_index, double alpha_lo,
                                double alpha_hi, int N, Branch branch = Branch::PositiveE);

/// Newton on (F̂, ∂F̂/∂E) = 0 in (E, α), F̂(E) = det(I − E B) with B the real
/// form of D^{-1/2} Σ D^{-1/2}. Throws Parameter when F̂ is not real on the
/// real axis and NonConvergence when the Jacobian degenerates (no critical
/// point). Exhausting 50 iterations returns the seed with degraded = true.
CriticalPoint newton_refine(const DensityModel& model, double alpha0, double E0, int N);

/// The first `count` (<= 12) points of a branch. Each is recomputed at 3N/2
/// and must agree to 1e-6 relative, else TruncationMismatch; the reported
/// values come from N.
std::vector<CriticalPoint> critical_sequence(const DensityModel& model, int count, int N,
                                             Branch branch = Branch::PositiveE);

}  // namespace ptstring
