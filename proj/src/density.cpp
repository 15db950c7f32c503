#include "ptstring/density.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "ptstring/errors.hpp"

namespace ptstring {

namespace {

constexpr double kDenominatorFloor = 1e-14;
constexpr cplx kI{0.0, 1.0};

void check_denominator(cplx d, double x) {
  if (std::abs(d) < kDenominatorFloor) {
    std::ostringstream os;
    os << "density denominator vanishes at x = " << x;
    throw Error(ErrorCode::Singularity, os.str());
  }
}

// Σ = A / u^4 with u = a x + b; covers both Borg-type strings.
DensityJet inverse_quartic(cplx amplitude, cplx slope, cplx offset, double x) {
  const cplx u = slope * x + offset;
  check_denominator(u, x);
  const cplx u2 = u * u;
  const cplx u4 = u2 * u2;
  const cplx value = amplitude / u4;
  return {value, -4.0 * slope * value / u, 20.0 * slope * slope * value / u2};
}

DensityJet family_jet(const FamilyParameters& p, double x) {
  const cplx c1sq = p.c1 * p.c1;
  const cplx shift = p.c2 + x;
  const cplx q = c1sq * shift * shift - 256.0 * p.kappa;
  check_denominator(q, x);
  const cplx dq = 2.0 * c1sq * shift;
  const cplx ddq = 2.0 * c1sq;
  const cplx num = 256.0 * c1sq;
  const cplx q2 = q * q;
  const cplx value = num / q2;
  const cplx d1 = -2.0 * num * dq / (q2 * q);
  const cplx d2 = -2.0 * num * (ddq / (q2 * q) - 3.0 * dq * dq / (q2 * q2));
  return {value, d1, d2};
}

}  // namespace

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::Uniform: return "Uniform";
    case DensityKind::LinearPT: return "LinearPT";
    case DensityKind::QuadraticPT: return "QuadraticPT";
    case DensityKind::Borg: return "Borg";
    case DensityKind::PTBorg: return "PTBorg";
    case DensityKind::SolvableFamily: return "SolvableFamily";
  }
  return "Unknown";
}

DensityKind density_kind_from_string(const std::string& name) {
  std::string key;
  for (char c : name) {
    if (c != '_' && c != '-') key.push_back(static_cast<char>(std::tolower(c)));
  }
  if (key == "uniform") return DensityKind::Uniform;
  if (key == "linearpt" || key == "linear") return DensityKind::LinearPT;
  if (key == "quadraticpt" || key == "quadratic") return DensityKind::QuadraticPT;
  if (key == "borg") return DensityKind::Borg;
  if (key == "ptborg") return DensityKind::PTBorg;
  if (key == "solvablefamily" || key == "family") return DensityKind::SolvableFamily;
  throw Error(ErrorCode::Config, "unknown density kind '" + name + "'");
}

DensityModel DensityModel::uniform() { return DensityModel{}; }

DensityModel DensityModel::linear_pt(double alpha) {
  DensityModel m;
  m.kind_ = DensityKind::LinearPT;
  m.alpha_ = alpha;
  return m;
}

DensityModel DensityModel::quadratic_pt(double alpha) {
  DensityModel m;
  m.kind_ = DensityKind::QuadraticPT;
  m.alpha_ = alpha;
  return m;
}

DensityModel DensityModel::borg(double alpha) {
  if (!(alpha > -1.0)) {
    throw Error(ErrorCode::Parameter, "Borg string requires alpha > -1");
  }
  DensityModel m;
  m.kind_ = DensityKind::Borg;
  m.alpha_ = alpha;
  // A real density is PT-symmetric only when it is even.
  m.pt_symmetric_ = (alpha == 0.0);
  return m;
}

DensityModel DensityModel::pt_borg(double alpha) {
  DensityModel m;
  m.kind_ = DensityKind::PTBorg;
  m.alpha_ = alpha;
  return m;
}

DensityModel DensityModel::solvable_family(cplx c1, cplx c2, double kappa) {
  if (c1 == cplx{}) {
    throw Error(ErrorCode::Parameter, "solvable family requires c1 != 0");
  }
  DensityModel m;
  m.kind_ = DensityKind::SolvableFamily;
  m.c1_ = c1;
  m.c2_ = c2;
  m.kappa_ = kappa;
  m.pt_symmetric_ = true;
  try {
    m.pt_symmetric_ = check_pt_symmetry(m, 101).symmetric;
  } catch (const Error&) {
    m.pt_symmetric_ = false;
  }
  return m;
}

DensityModel DensityModel::with_alpha(double alpha) const {
  switch (kind_) {
    case DensityKind::LinearPT: return linear_pt(alpha);
    case DensityKind::QuadraticPT: return quadratic_pt(alpha);
    case DensityKind::Borg: return borg(alpha);
    case DensityKind::PTBorg: return pt_borg(alpha);
    case DensityKind::Uniform:
    case DensityKind::SolvableFamily: return *this;
  }
  return *this;
}

DensityJet DensityModel::jet(double x) const {
  switch (kind_) {
    case DensityKind::Uniform:
      return {1.0, 0.0, 0.0};
    case DensityKind::LinearPT:
      return {1.0 + kI * alpha_ * x, kI * alpha_, 0.0};
    case DensityKind::QuadraticPT: {
      const cplx lin = 1.0 + kI * alpha_ * x;
      return {lin * lin, 2.0 * kI * alpha_ * lin, -2.0 * alpha_ * alpha_};
    }
    case DensityKind::Borg: {
      if (alpha_ == 0.0) return {1.0, 0.0, 0.0};
      const double a1 = alpha_ + 1.0;
      return inverse_quartic(16.0 * a1 * a1, 2.0 * alpha_, alpha_ + 2.0, x);
    }
    case DensityKind::PTBorg: {
      const double s = alpha_ * alpha_ + 64.0;
      return inverse_quartic(s * s / 16.0, alpha_, 4.0 * kI, x);
    }
    case DensityKind::SolvableFamily:
      return family_jet({c1_, c2_, kappa_}, x);
  }
  return {1.0, 0.0, 0.0};
}

std::optional<FamilyParameters> DensityModel::family_parameters() const {
  switch (kind_) {
    case DensityKind::Borg:
      if (alpha_ == 0.0) return std::nullopt;
      return FamilyParameters{16.0 * alpha_ * alpha_ / (alpha_ + 1.0),
                              (alpha_ + 2.0) / (2.0 * alpha_), 0.0};
    case DensityKind::PTBorg:
      if (alpha_ == 0.0) return std::nullopt;
      return FamilyParameters{64.0 * alpha_ * alpha_ / (alpha_ * alpha_ + 64.0),
                              4.0 * kI / alpha_, 0.0};
    case DensityKind::SolvableFamily:
      return FamilyParameters{c1_, c2_, kappa_};
    default:
      return std::nullopt;
  }
}

std::optional<double> DensityModel::matching_kappa() const {
  switch (kind_) {
    case DensityKind::Uniform:
    case DensityKind::Borg:
    case DensityKind::PTBorg:
      return 0.0;
    case DensityKind::SolvableFamily:
      return kappa_;
    case DensityKind::LinearPT:
    case DensityKind::QuadraticPT:
      if (alpha_ == 0.0) return 0.0;
      return std::nullopt;
  }
  return std::nullopt;
}

std::string DensityModel::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == DensityKind::SolvableFamily) {
    os << "(c1=" << c1_ << ", c2=" << c2_ << ", kappa=" << kappa_ << ")";
  } else if (kind_ != DensityKind::Uniform) {
    os << "(alpha=" << alpha_ << ")";
  }
  return os.str();
}

cplx evaluate(const DensityModel& model, double x) {
  if (!(std::abs(x) <= kHalfLength)) {
    std::ostringstream os;
    os << "x = " << x << " outside [-1/2, 1/2]";
    throw Error(ErrorCode::Domain, os.str());
  }
  return model.jet(x).value;
}

SymmetryReport check_pt_symmetry(const DensityModel& model, int grid_size) {
  if (grid_size < 2) {
    throw Error(ErrorCode::Parameter, "PT check needs grid_size >= 2");
  }
  double worst = 0.0;
  for (int j = 0; j < grid_size; ++j) {
    const double x = -kHalfLength + 2.0 * kHalfLength * j / (grid_size - 1);
    const cplx here = evaluate(model, x);
    const cplx mirror = evaluate(model, -x);
    worst = std::max(worst, std::abs(std::conj(mirror) - here) / (1.0 + std::abs(here)));
  }
  return {worst <= kPtTolerance, worst};
}

std::pair<double, double> decompose_even_odd(const DensityModel& model, double x) {
  const cplx v = evaluate(model, x);
  return {v.real(), v.imag()};
}

namespace {

double ode_residual(const DensityJet& j, double kappa) {
  const cplx r = 4.0 * j.d2 * j.value - 5.0 * j.d1 * j.d1 -
                 16.0 * kappa * j.value * j.value * j.value;
  const double scale = std::abs(j.value);
  return std::abs(r) / (1.0 + scale * scale * scale);
}

}  // namespace

double verify_density_ode(const DensityModel& model, double x, double kappa) {
  if (!(std::abs(x) <= kHalfLength)) {
    throw Error(ErrorCode::Domain, "x outside [-1/2, 1/2]");
  }
  return ode_residual(model.jet(x), kappa);
}

DensityJet numeric_jet(const std::function<cplx(double)>& density, double x, double h) {
  const cplx fm2 = density(x - 2 * h);
  const cplx fm1 = density(x - h);
  const cplx f0 = density(x);
  const cplx fp1 = density(x + h);
  const cplx fp2 = density(x + 2 * h);
  const cplx d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  const cplx d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  return {f0, d1, d2};
}

double verify_density_ode(const std::function<cplx(double)>& density, double x,
                          double kappa, double h) {
  return ode_residual(numeric_jet(density, x, h), kappa);
}

}  // namespace ptstring
