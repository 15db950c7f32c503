#include "ptstring/exact_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "ptstring/discretize.hpp"
#include "ptstring/errors.hpp"
#include "ptstring/quadrature.hpp"
#include "ptstring/spectrum.hpp"

namespace ptstring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kUnwrapSteps = 64;

bool is_constant(const DensityModel& m) {
  return m.kind() == DensityKind::Uniform ||
         ((m.kind() == DensityKind::Borg || m.kind() == DensityKind::PTBorg) && m.alpha() == 0.0);
}

}  // namespace

SolvableString::SolvableString(const DensityModel& model) : model_(model) {
  switch (model.kind()) {
    case DensityKind::Uniform:
    case DensityKind::Borg:
    case DensityKind::PTBorg:
    case DensityKind::SolvableFamily:
      break;
    default:
      throw Error(ErrorCode::Parameter, "density is not in the solvable family");
  }
  sigma_L_ = sigma(kHalfLength);
  if (has_closed_form_sigma() && !is_constant(model_)) {
    for (int j = 0; j <= 10; ++j) {
      const double x = -0.5 + 0.1 * j;
      sigma_discrepancy_ = std::max(sigma_discrepancy_, std::abs(sigma(x) - sigma_quadrature(x)));
    }
  }
}

namespace {

// Closed forms shared by the double API and the extended-precision residual.
template <class T>
std::complex<T> closed_root(const DensityModel& m, T x) {
  using C = std::complex<T>;
  if (is_constant(m)) return 1;
  const T a = m.alpha();
  switch (m.kind()) {
    case DensityKind::Borg: {
      const T u = 2 * a * x + a + 2;
      return 4 * (a + 1) / (u * u);
    }
    case DensityKind::PTBorg: {
      const C u(a * x, 4);
      return -(a * a + 64) / (T(4) * u * u);
    }
    default: {
      const auto p = *m.family_parameters();
      const C c1(p.c1), shift = C(p.c2) + x;
      return T(16) * c1 / (c1 * c1 * shift * shift - T(256) * T(p.kappa));
    }
  }
}

// Σ^{1/4}; nullopt when only the unwrapped numerical root is available.
template <class T>
std::optional<std::complex<T>> closed_quarter(const DensityModel& m, T x) {
  using C = std::complex<T>;
  if (is_constant(m)) return C(1);
  const T a = m.alpha();
  switch (m.kind()) {
    case DensityKind::Borg:
      return C(2 * std::sqrt(a + 1) / (2 * a * x + a + 2));
    case DensityKind::PTBorg:
      return std::sqrt(a * a + 64) / (T(2) * C(4, -a * x));
    default:
      return std::nullopt;
  }
}

template <class T>
std::optional<std::complex<T>> closed_sigma(const DensityModel& m, T x) {
  using C = std::complex<T>;
  const T half = 0.5;
  if (is_constant(m)) return C(x + half);
  const T a = m.alpha();
  switch (m.kind()) {
    case DensityKind::Borg:
      return C((a + 1) * (2 * x + 1) / (2 * a * x + a + 2));
    case DensityKind::PTBorg:
      return (a * a + 64) / (4 * a) * (T(1) / C(a * x, 4) - T(1) / C(-a / 2, 4));
    default: {
      if (m.kappa() != 0.0) return std::nullopt;
      const auto p = *m.family_parameters();
      const C c1(p.c1), c2(p.c2);
      return T(16) / c1 * (T(1) / (c2 - half) - T(1) / (c2 + x));
    }
  }
}

// φ_n / √Σ = √(2/σ_L) Σ^{-1/4} sin(nπσ/σ_L) for closed-form strings.
template <class T>
std::complex<T> closed_liouville(const DensityModel& m, int n, T x) {
  const std::complex<T> sl = *closed_sigma<T>(m, T(0.5));
  const T pi = std::numbers::pi_v<T>;
  return std::sqrt(T(2) / sl) / *closed_quarter<T>(m, x) *
         std::sin(T(n) * pi * *closed_sigma<T>(m, x) / sl);
}

}  // namespace

cplx SolvableString::root_density(double x) const { return closed_root<double>(model_, x); }

cplx SolvableString::quarter_root(double x) const {
  if (auto q = closed_quarter<double>(model_, x)) return *q;
  // continue the principal root at x = -1/2 along the segment
  cplx w = std::sqrt(root_density(-kHalfLength));
  for (int k = 1; k <= kUnwrapSteps; ++k) {
    const double t = -kHalfLength + (x + kHalfLength) * k / kUnwrapSteps;
    const cplx r = std::sqrt(root_density(t));
    w = std::abs(r - w) <= std::abs(r + w) ? r : -r;
  }
  return w;
}

bool SolvableString::has_closed_form_sigma() const {
  return closed_sigma<double>(model_, 0.0).has_value();
}

cplx SolvableString::sigma(double x) const {
  if (auto v = closed_sigma<double>(model_, x)) return *v;
  return sigma_quadrature(x);
}

cplx SolvableString::sigma_quadrature(double x) const {
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.initial_panels = 4;
  return integrate([&](double y) { return root_density(y); }, -kHalfLength, x, opt);
}

cplx SolvableString::eigenvalue(int n) const {
  // the Liouville potential of a family member is the constant κ
  const cplx k = n * kPi / sigma_L_;
  return k * k + model_.kappa();
}

cplx SolvableString::eigenfunction_unchecked(int n, double x) const {
  return std::sqrt(2.0 / sigma_L_) * quarter_root(x) * std::sin(n * kPi * sigma(x) / sigma_L_);
}

cplx exact_eigenfunction(const SolvableString& string, int n, double x) {
  if (n < 1) throw Error(ErrorCode::Parameter, "mode index must be positive");
  if (!(std::abs(x) <= kHalfLength)) throw Error(ErrorCode::Domain, "x outside [-1/2, 1/2]");
  if (string.sigma_discrepancy() > 1e-8) {
    throw Error(ErrorCode::BranchInconsistency,
                "closed-form and quadrature optical lengths disagree beyond 1e-8");
  }
  if (std::abs(x) == kHalfLength) return 0.0;
  return string.eigenfunction_unchecked(n, x);
}

double helmholtz_residual(const SolvableString& string, int n, int grid_size) {
  if (grid_size < 1) throw Error(ErrorCode::Parameter, "grid_size must be positive");
  const DensityModel& m = string.model();
  // Closed forms are differenced in long double: at h = 1e-4 the stencil
  // amplifies rounding by ~64/(12 h²), which would swamp double precision.
  const bool extended = closed_quarter<double>(m, 0.0) && closed_sigma<double>(m, 0.0);
  using L = long double;
  using CL = std::complex<L>;
  auto y = [&](L x) -> CL {
    if (extended) return closed_liouville<L>(m, n, x);
    const double xd = static_cast<double>(x);
    return CL(string.eigenfunction_unchecked(n, xd) / string.root_density(xd));
  };
  auto root = [&](L x) -> CL {
    if (extended) return closed_root<L>(m, x);
    return CL(string.root_density(static_cast<double>(x)));
  };
  const L h = 1e-4L;
  const CL e(string.eigenvalue(n));
  L worst = 0;
  L scale = 0;
  for (int j = 1; j <= grid_size; ++j) {
    const L x = L(-0.5) + L(j) / (grid_size + 1);
    const CL d2 = (-y(x + 2 * h) + L(16) * y(x + h) - L(30) * y(x) + L(16) * y(x - h) -
                   y(x - 2 * h)) / (12 * h * h);
    const CL r = root(x);
    const CL phi = y(x) * r;
    worst = std::max(worst, std::abs(-d2 / r - e * phi));
    scale = std::max(scale, std::abs(phi));
  }
  return static_cast<double>(worst / (std::abs(e) * scale));
}

double isospectrality_check(const DensityModel& model, int N) {
  if (N < 48) throw Error(ErrorCode::Parameter, "isospectrality check needs N >= 48");
  const DensityKind kind = model.kind();
  if (kind != DensityKind::Uniform && kind != DensityKind::Borg && kind != DensityKind::PTBorg) {
    throw Error(ErrorCode::Parameter, "isospectrality applies to the Borg strings only");
  }
  const ComplexSpectrum s = spectrum(assemble(model, N), kDefaultRealityTolerance,
                                     SolverPath::InverseStiffness, Ordering::RealPart);
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const double ref = n * n * kPi * kPi;
    worst = std::max(worst, std::abs(s.eigenvalues[n - 1] - ref) / ref);
  }
  return worst;
}

GramReport bilinear_gram(const SolvableString& string, int n_max, double quad_tol) {
  if (n_max < 1 || n_max > 20) throw Error(ErrorCode::Parameter, "n_max must lie in 1..20");
  QuadratureOptions opt;
  opt.abs_tol = quad_tol;
  opt.initial_panels = std::max(4, n_max);
  GramReport r;
  r.gram.resize(n_max, n_max);
  r.conjugate_gram.resize(n_max, n_max);
  for (int n = 1; n <= n_max; ++n) {
    for (int m = n; m <= n_max; ++m) {
      r.gram(n - 1, m - 1) = r.gram(m - 1, n - 1) = integrate(
          [&](double x) {
            return string.eigenfunction_unchecked(n, x) * string.eigenfunction_unchecked(m, x);
          },
          -kHalfLength, kHalfLength, opt);
    }
    for (int m = 1; m <= n_max; ++m) {
      r.conjugate_gram(n - 1, m - 1) = integrate(
          [&](double x) {
            return std::conj(string.eigenfunction_unchecked(n, -x)) *
                   string.eigenfunction_unchecked(m, x);
          },
          -kHalfLength, kHalfLength, opt);
    }
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_max, n_max);
  r.deviation = (r.gram - id).cwiseAbs().maxCoeff();
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(n_max, n_max);
  for (int n = 0; n < n_max; ++n) {
    r.signs.push_back(r.conjugate_gram(n, n).real() >= 0 ? 1 : -1);
    expected(n, n) = static_cast<double>(r.signs.back());
  }
  r.conjugate_deviation = (r.conjugate_gram - expected).cwiseAbs().maxCoeff();
  return r;
}

cplx pt_delta(const SolvableString& string, double x, double y, int terms) {
  if (terms < 1 || terms > 200) throw Error(ErrorCode::Parameter, "terms must lie in 1..200");
  cplx sum{};
  for (int n = 1; n <= terms; ++n) {
    sum += exact_eigenfunction(string, n, x) * exact_eigenfunction(string, n, y);
  }
  return sum;
}

}  // namespace ptstring
