#include "ptstring/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "ptstring/errors.hpp"

namespace ptstring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConditionLimit = 1e12;

struct Ordered {
  ComplexSpectrum spectrum;
  std::vector<int> source;  // source[k] = position in the raw list
};

Ordered order_and_tag(const std::vector<cplx>& raw, double tol, Ordering ordering) {
  const int n = static_cast<int>(raw.size());
  std::vector<EigenTag> tag(n, EigenTag::Real);
  std::vector<int> partner(n, -1);

  std::vector<int> lower;
  std::vector<int> upper;
  for (int k = 0; k < n; ++k) {
    const cplx e = raw[k];
    if (std::abs(e.imag()) <= tol * (1.0 + std::abs(e)) || !std::isfinite(std::abs(e))) {
      continue;
    }
    (e.imag() < 0 ? lower : upper).push_back(k);
  }
  // Greedy nearest-conjugate matching, lowest real part first.
  std::sort(lower.begin(), lower.end(),
            [&](int a, int b) { return raw[a].real() < raw[b].real(); });
  std::vector<bool> used(n, false);
  for (int l : lower) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int u : upper) {
      if (used[u]) continue;
      const double d = std::abs(raw[u] - std::conj(raw[l]));
      if (d < best_dist) {
        best_dist = d;
        best = u;
      }
    }
    tag[l] = EigenTag::PairLower;
    if (best >= 0) {
      used[best] = true;
      tag[best] = EigenTag::PairUpper;
      partner[l] = best;
      partner[best] = l;
    }
  }
  for (int u : upper) {
    if (!used[u]) tag[u] = EigenTag::PairUpper;
  }

  // Pair members share a key so they stay adjacent, lower member first.
  auto key = [&](int k) {
    cplx e = raw[k];
    if (partner[k] >= 0) e = 0.5 * (raw[k] + std::conj(raw[partner[k]]));
    if (tag[k] == EigenTag::Real) e = e.real();
    return ordering == Ordering::RealPart ? e.real() : std::abs(e);
  };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> keys(n);
  for (int k = 0; k < n; ++k) keys[k] = key(k);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    if (partner[a] == b) return tag[a] == EigenTag::PairLower;
    return raw[a].imag() < raw[b].imag();
  });

  std::vector<int> position(n);
  for (int k = 0; k < n; ++k) position[perm[k]] = k;

  Ordered out;
  out.source = perm;
  ComplexSpectrum& s = out.spectrum;
  s.reality_tolerance = tol;
  s.ordering = ordering;
  s.eigenvalues.resize(n);
  s.tags.resize(n);
  s.partner.resize(n);
  for (int k = 0; k < n; ++k) {
    const int src = perm[k];
    s.eigenvalues[k] = raw[src];
    s.tags[k] = tag[src];
    s.partner[k] = partner[src] >= 0 ? position[partner[src]] : -1;
  }
  return out;
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) {
    throw Error(ErrorCode::Parameter, "reality_tolerance must lie in [1e-12, 1e-6]");
  }
}

cplx invert(cplx mu) {
  if (mu == cplx{}) return {std::numeric_limits<double>::infinity(), 0.0};
  return 1.0 / mu;
}

std::vector<cplx> inverse_stiffness_values(const PencilMatrices& pencil) {
  std::vector<cplx> values;
  values.reserve(pencil.dim);
  if (auto rf = real_form(pencil)) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(rf->matrix, false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NonConvergence, "real eigenvalue solver failed");
    }
    for (const cplx& mu : solver.eigenvalues()) values.push_back(invert(mu));
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(pencil.scaled_density(), false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NonConvergence, "complex eigenvalue solver failed");
    }
    for (const cplx& mu : solver.eigenvalues()) values.push_back(invert(mu));
  }
  return values;
}

std::vector<cplx> density_inverse_values(const PencilMatrices& pencil) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pencil.density_matrix);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kConditionLimit)) {
    throw Error(ErrorCode::IllConditioned,
                "density matrix condition estimate exceeds 1e12");
  }
  const Eigen::MatrixXcd stiffness = pencil.stiffness.cast<cplx>().asDiagonal();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(lu.solve(stiffness), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "complex eigenvalue solver failed");
  }
  return {solver.eigenvalues().begin(), solver.eigenvalues().end()};
}

}  // namespace

Ordering default_ordering(DensityKind kind) {
  return kind == DensityKind::QuadraticPT ? Ordering::Modulus : Ordering::RealPart;
}

int ComplexSpectrum::count_real(int k) const {
  const int limit = std::min<int>(k, static_cast<int>(tags.size()));
  return static_cast<int>(
      std::count(tags.begin(), tags.begin() + limit, EigenTag::Real));
}

ComplexSpectrum classify(std::vector<cplx> values, double reality_tolerance,
                         Ordering ordering) {
  return order_and_tag(values, reality_tolerance, ordering).spectrum;
}

ComplexSpectrum spectrum(const PencilMatrices& pencil, double reality_tolerance,
                         SolverPath path, std::optional<Ordering> ordering) {
  check_tolerance(reality_tolerance);
  const auto raw = path == SolverPath::InverseStiffness ? inverse_stiffness_values(pencil)
                                                        : density_inverse_values(pencil);
  ComplexSpectrum s =
      classify(raw, reality_tolerance, ordering.value_or(default_ordering(pencil.model.kind())));
  s.truncation = pencil.dim;
  s.model = pencil.model;
  return s;
}

// ---------------------------------------------------------------------------

namespace {

cplx sine_series(const Eigen::VectorXcd& c, double x, bool second) {
  const double t = kPi * (x + 0.5);
  cplx sum{};
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    const double k = static_cast<double>(m + 1);
    double basis = std::numbers::sqrt2 * std::sin(k * t);
    if (second) basis *= -(k * kPi) * (k * kPi);
    sum += c(m) * basis;
  }
  return sum;
}

// ψ*(−x) in coefficient form: u_m(−x) = (−1)^{m+1} u_m(x).
Eigen::VectorXcd pt_image(const Eigen::VectorXcd& c) {
  Eigen::VectorXcd out(c.size());
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    out(m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c(m));
  }
  return out;
}

void fix_sign(Eigen::VectorXcd& c) {
  double best = -1.0;
  cplx at_best{};
  constexpr int kGrid = 1001;
  for (int j = 0; j < kGrid; ++j) {
    const double x = -0.5 + static_cast<double>(j) / (kGrid - 1);
    const cplx v = sine_series(c, x, false);
    if (std::abs(v) > best) {
      best = std::abs(v);
      at_best = v;
    }
  }
  if (at_best.real() < 0.0 || (at_best.real() == 0.0 && at_best.imag() < 0.0)) c = -c;
}

}  // namespace

ModeSet::ModeSet(const PencilMatrices& pencil, double reality_tolerance,
                 std::optional<Ordering> ordering)
    : pencil_(pencil) {
  check_tolerance(reality_tolerance);
  const int n = pencil.dim;
  std::vector<cplx> raw(n);
  Eigen::MatrixXcd vectors(n, n);

  if (auto rf = real_form(pencil)) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(rf->matrix, true);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NonConvergence, "real eigenvalue solver failed");
    }
    vectors = solver.eigenvectors();
    if (rf->phased) {
      // y = diag(i^-m) v
      static const cplx inv_powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
      for (int m = 0; m < n; ++m) vectors.row(m) *= inv_powers[m % 4];
    }
    for (int k = 0; k < n; ++k) raw[k] = invert(solver.eigenvalues()(k));
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(pencil.scaled_density(), true);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NonConvergence, "complex eigenvalue solver failed");
    }
    vectors = solver.eigenvectors();
    for (int k = 0; k < n; ++k) raw[k] = invert(solver.eigenvalues()(k));
  }

  Ordered ord = order_and_tag(raw, reality_tolerance,
                              ordering.value_or(default_ordering(pencil.model.kind())));
  spectrum_ = std::move(ord.spectrum);
  spectrum_.truncation = n;
  spectrum_.model = pencil.model;

  const Eigen::VectorXd inv_root = pencil.stiffness.cwiseSqrt().cwiseInverse();
  coefficients_.resize(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd c = inv_root.asDiagonal() * vectors.col(ord.source[k]);
    const cplx norm = c.transpose() * c;
    if (norm != cplx{}) c /= std::sqrt(norm);
    coefficients_[k] = std::move(c);
  }
  const bool pt = pencil.model.pt_symmetric();
  for (int k = 0; k < n; ++k) {
    const EigenTag tag = spectrum_.tags[k];
    const int partner = spectrum_.partner[k];
    if (tag == EigenTag::PairUpper && pt && partner >= 0) continue;
    fix_sign(coefficients_[k]);
    if (tag == EigenTag::PairLower && pt && partner >= 0) {
      coefficients_[partner] = pt_image(coefficients_[k]);
    }
  }
}

void ModeSet::check_index(int index) const {
  if (index < 1 || index > size()) {
    throw Error(ErrorCode::OutOfRange, "mode index out of range");
  }
}

cplx ModeSet::eigenvalue(int index) const {
  check_index(index);
  return spectrum_.eigenvalues[index - 1];
}

const Eigen::VectorXcd& ModeSet::coefficients(int index) const {
  check_index(index);
  return coefficients_[index - 1];
}

cplx ModeSet::value(int index, double x) const {
  check_index(index);
  if (!(std::abs(x) <= kHalfLength)) throw Error(ErrorCode::Domain, "x outside [-1/2, 1/2]");
  return sine_series(coefficients_[index - 1], x, false);
}

cplx ModeSet::second_derivative(int index, double x) const {
  check_index(index);
  if (!(std::abs(x) <= kHalfLength)) throw Error(ErrorCode::Domain, "x outside [-1/2, 1/2]");
  return sine_series(coefficients_[index - 1], x, true);
}

double ModeSet::galerkin_residual(int index) const {
  check_index(index);
  const Eigen::VectorXcd& c = coefficients_[index - 1];
  const cplx e = eigenvalue(index);
  const Eigen::VectorXcd mass = e * (pencil_.density_matrix * c);
  const Eigen::VectorXcd r = pencil_.stiffness.cast<cplx>().cwiseProduct(c) - mass;
  return r.norm() / mass.norm();
}

double ModeSet::pointwise_residual(int index, int grid_size) const {
  check_index(index);
  const cplx e = eigenvalue(index);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < grid_size; ++j) {
    const double x = -0.5 + static_cast<double>(j) / (grid_size - 1);
    const double w = (j == 0 || j == grid_size - 1) ? 0.5 : 1.0;
    const cplx load = e * pencil_.model(x) * value(index, x);
    const cplx r = second_derivative(index, x) + load;
    num += w * std::norm(r);
    den += w * std::norm(load);
  }
  return std::sqrt(num / den);
}

cplx eigenfunction(const PencilMatrices& pencil, int index, double x) {
  return ModeSet(pencil).value(index, x);
}

}  // namespace ptstring
