#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ptstring/spectrum.hpp"

namespace ptstring {

/// Fourier-sine collocation of (1/√Σ)(−d²/dx²)(1/√Σ) on M interior points.
struct CollocationGrid {
  int M = 0;
  std::vector<double> points;          ///< x_j = −1/2 + j/(M+1), j = 1..M
  std::vector<cplx> density;           ///< Σ(x_j)
  Eigen::MatrixXcd operator_matrix;    ///< S K S, S = diag(Σ^{-1/2}) (principal branch)
  bool branch_warning = false;         ///< arg Σ crosses the principal cut along the grid
  DensityModel model = DensityModel::uniform();
};

/// Orthonormal DST-I matrix: T_jk = √(2/(M+1)) sin(jkπ/(M+1)).
Eigen::MatrixXd sine_transform(int M);

/// Throws Parameter for M < 8 and DensityZero if |Σ(x_j)| < 1e-12.
CollocationGrid build(const DensityModel& model, int M);

/// Lowest `count` eigenvalues of operator_matrix, classified as in spectrum().
/// Solved through the similar matrix Λ^{-1/2} T diag(Σ) T Λ^{-1/2}, which does
/// not depend on the square-root branch.
ComplexSpectrum spectrum_collocation(const CollocationGrid& grid, int count,
                                     double reality_tolerance = kDefaultRealityTolerance,
                                     std::optional<Ordering> ordering = std::nullopt);

}  // namespace ptstring
