#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ptstring/discretize.hpp"

namespace ptstring {

enum class EigenTag { Real, PairLower, PairUpper };
enum class Ordering { RealPart, Modulus };

/// Real-part ordering except QuadraticPT, whose truncated pencils carry
/// spurious large negative eigenvalues; there the physical modes come first by |E|.
Ordering default_ordering(DensityKind kind);

inline constexpr double kDefaultRealityTolerance = 1e-9;

struct ComplexSpectrum {
  std::vector<cplx> eigenvalues;
  std::vector<EigenTag> tags;
  std::vector<int> partner;  ///< index of the conjugate partner, -1 for Real
  int truncation = 0;
  DensityModel model = DensityModel::uniform();
  double reality_tolerance = kDefaultRealityTolerance;
  Ordering ordering = Ordering::RealPart;

  std::size_t size() const { return eigenvalues.size(); }
  /// Number of Real-tagged eigenvalues among the first k.
  int count_real(int k) const;
};

/// Sorts, tags and pairs a raw eigenvalue list.
ComplexSpectrum classify(std::vector<cplx> values, double reality_tolerance, Ordering ordering);

enum class SolverPath {
  InverseStiffness,  ///< eigenvalues 1/E of D^{-1/2} Σ D^{-1/2}, in real form when available
  DensityInverse,    ///< eigenvalues of Σ^{-1} D after an LU solve
};

/// All eigenvalues of D C = E Σ C.
ComplexSpectrum spectrum(const PencilMatrices& pencil,
                         double reality_tolerance = kDefaultRealityTolerance,
                         SolverPath path = SolverPath::InverseStiffness,
                         std::optional<Ordering> ordering = std::nullopt);

/// Eigenpairs of the pencil with eigenfunctions ψ = Σ c_m u_m normalized by
/// ∫ ψ² dx = 1 (no conjugation). Real modes have Re ψ > 0 at the point of
/// maximum modulus; each PairUpper mode is ψ_lower*(−x).
class ModeSet {
 public:
  explicit ModeSet(const PencilMatrices& pencil,
                   double reality_tolerance = kDefaultRealityTolerance,
                   std::optional<Ordering> ordering = std::nullopt);

  const ComplexSpectrum& spectrum() const { return spectrum_; }
  int size() const { return static_cast<int>(spectrum_.size()); }
  cplx eigenvalue(int index) const;
  /// Sine-basis coefficients of mode `index` (1-based).
  const Eigen::VectorXcd& coefficients(int index) const;
  /// ψ_index(x); index is 1-based in spectrum order.
  cplx value(int index, double x) const;
  /// ψ''_index(x) by termwise differentiation of the sine expansion.
  cplx second_derivative(int index, double x) const;

  /// ‖D c − E Σ c‖ / ‖E Σ c‖ in the truncated basis.
  double galerkin_residual(int index) const;
  /// L² norm of ψ'' + E Σ ψ over a uniform grid, relative to ‖E Σ ψ‖.
  double pointwise_residual(int index, int grid_size = 2001) const;

 private:
  void check_index(int index) const;

  PencilMatrices pencil_;
  ComplexSpectrum spectrum_;
  std::vector<Eigen::VectorXcd> coefficients_;
};

/// Convenience: ψ_index(x) for one evaluation.
cplx eigenfunction(const PencilMatrices& pencil, int index, double x);

}  // namespace ptstring
