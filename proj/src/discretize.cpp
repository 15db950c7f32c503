#include "ptstring/discretize.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ptstring/errors.hpp"
#include "ptstring/quadrature.hpp"

namespace ptstring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureTolerance = 1e-12;

// ∫_{-1/2}^{1/2} x^power cos(jπ(x + 1/2)) dx
double cosine_moment(int power, int j) {
  if (j == 0) {
    switch (power) {
      case 0: return 1.0;
      case 1: return 0.0;
      default: return 1.0 / 12.0;
    }
  }
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  const double jp2 = (j * kPi) * (j * kPi);
  switch (power) {
    case 0: return 0.0;
    case 1: return (sign - 1.0) / jp2;
    default: return (sign + 1.0) / jp2;
  }
}

cplx closed_form_coefficient(const DensityModel& model, int j) {
  const double a = model.alpha();
  const cplx i{0.0, 1.0};
  switch (model.kind()) {
    case DensityKind::Uniform:
      return cosine_moment(0, j);
    case DensityKind::LinearPT:
      return cosine_moment(0, j) + i * a * cosine_moment(1, j);
    case DensityKind::QuadraticPT:
      return cosine_moment(0, j) + 2.0 * i * a * cosine_moment(1, j) -
             a * a * cosine_moment(2, j);
    default:
      throw Error(ErrorCode::Parameter, "no closed form for " + to_string(model.kind()));
  }
}

cplx quadrature_coefficient(const DensityModel& model, int j) {
  QuadratureOptions opt;
  opt.abs_tol = kQuadratureTolerance;
  opt.initial_panels = std::max(1, j / 4);
  const double freq = j * kPi;
  return integrate(
      [&](double x) { return model(x) * std::cos(freq * (x + 0.5)); },
      -kHalfLength, kHalfLength, opt);
}

}  // namespace

bool has_closed_form(DensityKind kind) {
  return kind == DensityKind::Uniform || kind == DensityKind::LinearPT ||
         kind == DensityKind::QuadraticPT;
}

double sine_moment(int power, int m, int n) {
  if (power < 0 || power > 2) {
    throw Error(ErrorCode::OutOfRange, "sine_moment supports powers 0, 1, 2");
  }
  return cosine_moment(power, std::abs(m - n)) - cosine_moment(power, m + n);
}

std::vector<cplx> density_cosine_coefficients(const DensityModel& model, int jmax,
                                              AssemblyMethod method) {
  bool closed = has_closed_form(model.kind());
  if (method == AssemblyMethod::ClosedForm && !closed) {
    throw Error(ErrorCode::Parameter, "no closed form for " + to_string(model.kind()));
  }
  if (method == AssemblyMethod::Quadrature) closed = false;
  std::vector<cplx> c(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    c[j] = closed ? closed_form_coefficient(model, j) : quadrature_coefficient(model, j);
  }
  return c;
}

PencilMatrices assemble(const DensityModel& model, int N, AssemblyMethod method) {
  if (N < 2) throw Error(ErrorCode::Parameter, "assemble requires N >= 2");
  const auto c = density_cosine_coefficients(model, 2 * N, method);
  PencilMatrices p;
  p.dim = N;
  p.model = model;
  p.stiffness.resize(N);
  p.density_matrix.resize(N, N);
  for (int m = 1; m <= N; ++m) {
    p.stiffness(m - 1) = (m * kPi) * (m * kPi);
    for (int n = 1; n <= N; ++n) {
      p.density_matrix(m - 1, n - 1) = c[std::abs(m - n)] - c[m + n];
    }
  }
  return p;
}

Eigen::MatrixXcd PencilMatrices::scaled_density() const {
  const Eigen::VectorXd inv_root = stiffness.cwiseSqrt().cwiseInverse();
  return inv_root.asDiagonal() * density_matrix * inv_root.asDiagonal();
}

std::optional<RealForm> real_form(const PencilMatrices& pencil) {
  const Eigen::MatrixXcd a = pencil.scaled_density();
  const double scale = a.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(scale, std::numeric_limits<double>::min());

  if (a.imag().cwiseAbs().maxCoeff() <= tol) return RealForm{a.real(), false};

  // diag(i^m) A diag(i^-m): entry (m, n) picks up i^(m-n).
  static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Eigen::MatrixXcd b(a.rows(), a.cols());
  for (Eigen::Index m = 0; m < a.rows(); ++m) {
    for (Eigen::Index n = 0; n < a.cols(); ++n) {
      b(m, n) = powers[((m - n) % 4 + 4) % 4] * a(m, n);
    }
  }
  if (b.imag().cwiseAbs().maxCoeff() <= tol) return RealForm{b.real(), true};
  return std::nullopt;
}

std::optional<cplx> LogDeterminant::value() const {
  if (log_abs == -std::numeric_limits<double>::infinity()) return cplx{};
  if (log_abs > std::log(std::numeric_limits<double>::max())) return std::nullopt;
  return std::polar(std::exp(log_abs), phase);
}

namespace {

struct Factored {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  LogDeterminant det;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

Factored factor(const PencilMatrices& pencil, cplx E) {
  Eigen::MatrixXcd m = -E * pencil.density_matrix;
  m.diagonal() += pencil.stiffness.cast<cplx>();
  Factored f{Eigen::PartialPivLU<Eigen::MatrixXcd>(m), {}, 0.0, 0.0};
  const Eigen::MatrixXcd& lu = f.lu.matrixLU();
  double log_abs = 0.0;
  double phase = f.lu.permutationP().determinant() < 0 ? kPi : 0.0;
  f.min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < lu.rows(); ++k) {
    const double mag = std::abs(lu(k, k));
    f.min_pivot = std::min(f.min_pivot, mag);
    f.max_pivot = std::max(f.max_pivot, mag);
    log_abs += std::log(mag);
    if (mag > 0.0) phase += std::arg(lu(k, k));
  }
  f.det = {log_abs, std::remainder(phase, 2.0 * kPi)};
  return f;
}

}  // namespace

LogDeterminant secular_determinant(const PencilMatrices& pencil, cplx E) {
  return factor(pencil, E).det;
}

LogDeterminant secular_derivative(const PencilMatrices& pencil, cplx E) {
  const Factored f = factor(pencil, E);
  if (!(f.min_pivot > 1e-14 * f.max_pivot)) {
    throw Error(ErrorCode::SingularPencil,
                "secular_derivative: D - E*Sigma is numerically singular");
  }
  const cplx trace = f.lu.solve(pencil.density_matrix).trace();
  if (trace == cplx{}) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  const cplx factor_term = -trace;
  return {f.det.log_abs + std::log(std::abs(factor_term)),
          std::remainder(f.det.phase + std::arg(factor_term), 2.0 * kPi)};
}

}  // namespace ptstring
