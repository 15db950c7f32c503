#pragma once

#include <utility>
#include <vector>

#include "ptstring/critical.hpp"

namespace ptstring {

/// Which variable plays the role of y in y = b + c |x|^{-s}.
enum class FitOrientation {
  AlphaOfE,  ///< α_n = b + c |e_n|^{-s}
  EOfAlpha,  ///< e_n = b + c |α_n|^{-s}; the negative-e branch is fitted this way
};

struct FitResult {
  double b = 0.0, c = 0.0, s = 0.0;
  double sigma_b = 0.0, sigma_c = 0.0, sigma_s = 0.0;
  double residual_norm = 0.0;  ///< root-mean-square residual
  std::vector<std::pair<double, double>> points_used;  ///< (α_n, e_n)
  FitOrientation orientation = FitOrientation::AlphaOfE;
};

/// Levenberg-Marquardt fit with numeric Jacobian (relative step 1e-7) and
/// multistart over s in {0.25, 0.5, 1, 2}; ties go to the smallest s.
/// Throws Parameter for fewer than 4 points and DegenerateData when the
/// abscissae coincide or the Jacobian is singular at the optimum.
FitResult fit_critical(const std::vector<std::pair<double, double>>& alpha_e,
                       FitOrientation orientation = FitOrientation::AlphaOfE);
FitResult fit_critical(const std::vector<CriticalPoint>& points,
                       FitOrientation orientation = FitOrientation::AlphaOfE);

/// RMS residual of the best constant fit, the baseline a useful fit must beat.
double constant_fit_residual(const FitResult& fit);

struct ConjectureCheck {
  std::vector<double> deviations;  ///< |α_n − 2 − 1/√(2e_n)| / α_n per point
  double max_deviation = 0.0;
};

/// Positive-e branch of the quadratic density only (WrongBranch otherwise).
ConjectureCheck conjecture_check(const std::vector<CriticalPoint>& points);

}  // namespace ptstring
