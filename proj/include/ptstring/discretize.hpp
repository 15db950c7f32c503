#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ptstring/density.hpp"

namespace ptstring {

/// Truncated Rayleigh-Ritz pencil in the sine basis u_n = √2 sin(nπ(x + 1/2)).
struct PencilMatrices {
  int dim = 0;
  Eigen::VectorXd stiffness;        ///< n²π², n = 1..dim
  Eigen::MatrixXcd density_matrix;  ///< ∫ u_m Σ u_n dx
  DensityModel model = DensityModel::uniform();

  /// D^{-1/2} Σ D^{-1/2}; its eigenvalues are 1/E.
  Eigen::MatrixXcd scaled_density() const;
};

enum class AssemblyMethod { Auto, ClosedForm, Quadrature };

/// ∫ u_m x^power u_n dx for power 0, 1, 2 (closed form).
double sine_moment(int power, int m, int n);

/// c_j = ∫ Σ(x) cos(jπ(x + 1/2)) dx for j = 0..jmax. Σ_mn = c_{|m-n|} − c_{m+n}.
std::vector<cplx> density_cosine_coefficients(const DensityModel& model, int jmax,
                                              AssemblyMethod method = AssemblyMethod::Auto);

/// Closed forms exist for Uniform, LinearPT and QuadraticPT.
bool has_closed_form(DensityKind kind);

/// Throws Parameter for N < 2 and Quadrature if an entry misses 1e-12.
PencilMatrices assemble(const DensityModel& model, int N,
                        AssemblyMethod method = AssemblyMethod::Auto);

/// Real matrix similar to scaled_density(): diag(i^m) A diag(i^-m) for PT
/// densities (phased = true), A itself for real ones. nullopt when neither is real.
struct RealForm {
  Eigen::MatrixXd matrix;
  bool phased = false;
};
std::optional<RealForm> real_form(const PencilMatrices& pencil);

/// det in log-magnitude form: F = exp(log_abs) · exp(i phase).
struct LogDeterminant {
  double log_abs = 0.0;
  double phase = 0.0;

  /// F itself, unless exp(log_abs) overflows.
  std::optional<cplx> value() const;
};

/// det(D − E Σ) by partial-pivot LU.
LogDeterminant secular_determinant(const PencilMatrices& pencil, cplx E);

/// ∂F/∂E = −F tr[(D − EΣ)^{-1} Σ]. Throws SingularPencil when E is an eigenvalue.
LogDeterminant secular_derivative(const PencilMatrices& pencil, cplx E);

}  // namespace ptstring
