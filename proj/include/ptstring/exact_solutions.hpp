#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ptstring/density.hpp"

namespace ptstring {

/// A density of the exactly solvable family (Uniform, Borg, PTBorg or
/// SolvableFamily) with its optical length σ(x) = ∫_{-1/2}^x √Σ(y) dy.
/// Eigenpairs: φ_n = √(2/σ_L) Σ^{1/4} sin(nπσ/σ_L), E_n = (nπ/σ_L)² + κ.
class SolvableString {
 public:
  /// Throws Parameter for LinearPT / QuadraticPT. Validates the closed-form σ
  /// against quadrature on 11 nodes.
  explicit SolvableString(const DensityModel& model);

  const DensityModel& model() const { return model_; }
  /// √Σ on the branch continuous along the string (positive for the uniform string).
  cplx root_density(double x) const;
  /// Σ^{1/4}, the square root of root_density() continued along the string.
  cplx quarter_root(double x) const;
  /// Closed form where one exists (κ = 0 members), otherwise quadrature.
  cplx sigma(double x) const;
  cplx sigma_quadrature(double x) const;
  cplx sigma_L() const { return sigma_L_; }
  bool has_closed_form_sigma() const;
  /// max |σ_closed − σ_quadrature| over the validation nodes.
  double sigma_discrepancy() const { return sigma_discrepancy_; }
  cplx eigenvalue(int n) const;

  /// φ_n(x) without the domain check; used for finite differences at the ends.
  cplx eigenfunction_unchecked(int n, double x) const;

 private:
  DensityModel model_;
  cplx sigma_L_{1.0, 0.0};
  double sigma_discrepancy_ = 0.0;
};

/// φ_n(x). Throws Domain for |x| > 1/2, Parameter for n < 1 and
/// BranchInconsistency when the two σ evaluations disagree beyond 1e-8.
cplx exact_eigenfunction(const SolvableString& string, int n, double x);

/// max_j |Ôφ_n − E_n φ_n|(x_j) / (E_n max_j |φ_n(x_j)|) on grid_size interior
/// points, Ô = −Σ^{-1/2} d²/dx² Σ^{-1/2}, second derivative by 4th-order
/// central differences with step 1e-4.
double helmholtz_residual(const SolvableString& string, int n, int grid_size);

/// max_{n<=8} |E_n − n²π²| / (n²π²) of the Rayleigh-Ritz spectrum. N >= 48.
double isospectrality_check(const DensityModel& model, int N);

struct GramReport {
  Eigen::MatrixXcd gram;           ///< ∫ φ_n φ_m dx
  Eigen::MatrixXcd conjugate_gram; ///< ∫ φ_n*(−x) φ_m(x) dx
  std::vector<int> signs;          ///< sign of the diagonal of conjugate_gram
  double deviation = 0.0;          ///< ‖gram − I‖_max
  double conjugate_deviation = 0.0;///< ‖conjugate_gram − diag(signs)‖_max
};

/// Adaptive-quadrature Gram matrices for n, m <= n_max (<= 20).
GramReport bilinear_gram(const SolvableString& string, int n_max, double quad_tol = 1e-12);

/// δ̄_K(x, y) = Σ_{n<=K} φ_n(x) φ_n(y), summed in ascending n. K <= 200.
cplx pt_delta(const SolvableString& string, double x, double y, int terms);

}  // namespace ptstring
