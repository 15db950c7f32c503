#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace ptstring {

using cplx = std::complex<double>;

/// Half-length of the string; every density lives on [-kHalfLength, kHalfLength].
inline constexpr double kHalfLength = 0.5;

enum class DensityKind { Uniform, LinearPT, QuadraticPT, Borg, PTBorg, SolvableFamily };

std::string to_string(DensityKind kind);
DensityKind density_kind_from_string(const std::string& name);

/// Value and first two x-derivatives of a density at one point.
struct DensityJet {
  cplx value;
  cplx d1;
  cplx d2;
};

/// Parameters of the solvable family Σ = 256 c1² / (c1² (c2 + x)² − 256 κ)².
struct FamilyParameters {
  cplx c1;
  cplx c2;
  double kappa;
};

/// A string density Σ(x) on |x| <= 1/2. Immutable after construction.
class DensityModel {
 public:
  static DensityModel uniform();
  static DensityModel linear_pt(double alpha);
  static DensityModel quadratic_pt(double alpha);
  /// Throws ErrorCode::Parameter unless alpha > -1.
  static DensityModel borg(double alpha);
  static DensityModel pt_borg(double alpha);
  static DensityModel solvable_family(cplx c1, cplx c2, double kappa);

  DensityKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  cplx c1() const noexcept { return c1_; }
  cplx c2() const noexcept { return c2_; }
  double kappa() const noexcept { return kappa_; }

  /// False for asymmetric members (a real Borg string with alpha != 0, or a
  /// family member with generic constants).
  bool pt_symmetric() const noexcept { return pt_symmetric_; }

  /// Copy with a different alpha; only meaningful for alpha-parametrized kinds.
  DensityModel with_alpha(double alpha) const;

  cplx operator()(double x) const { return jet(x).value; }
  DensityJet jet(double x) const;

  /// Representation as a member of the solvable family, when one exists.
  /// Uniform and Borg(0) map to nullopt: the constant density solves the
  /// density ODE with kappa = 0 but has no finite (c1, c2).
  std::optional<FamilyParameters> family_parameters() const;

  /// kappa for which 4Σ''Σ − 5Σ'² − 16κΣ³ = 0 holds identically, if any.
  std::optional<double> matching_kappa() const;

  std::string describe() const;

  friend bool operator==(const DensityModel&, const DensityModel&) = default;

 private:
  DensityModel() = default;

  DensityKind kind_ = DensityKind::Uniform;
  double alpha_ = 0.0;
  cplx c1_{};
  cplx c2_{};
  double kappa_ = 0.0;
  bool pt_symmetric_ = true;
};

/// Σ(x). Throws Domain for |x| > 1/2 and Singularity near denominator zeros.
cplx evaluate(const DensityModel& model, double x);

struct SymmetryReport {
  bool symmetric;
  double max_deviation;
};

/// max over a symmetric grid of |Σ(−x)* − Σ(x)| / (1 + |Σ(x)|), tolerance 1e-12.
SymmetryReport check_pt_symmetry(const DensityModel& model, int grid_size);

inline constexpr double kPtTolerance = 1e-12;

/// (Re Σ(x), Im Σ(x)); for PT densities the first is even and the second odd.
std::pair<double, double> decompose_even_odd(const DensityModel& model, double x);

/// |4Σ''Σ − 5Σ'² − 16κΣ³| / (1 + |Σ|³) using analytic derivatives.
double verify_density_ode(const DensityModel& model, double x, double kappa);

/// Same residual for an arbitrary density, derivatives by 4th-order central
/// differences with step h.
double verify_density_ode(const std::function<cplx(double)>& density, double x,
                          double kappa, double h = 1e-5);

/// 4th-order central-difference jet of an arbitrary density.
DensityJet numeric_jet(const std::function<cplx(double)>& density, double x,
                       double h = 1e-5);

}  // namespace ptstring
