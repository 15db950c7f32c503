#include "ptstring/collocation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ptstring/errors.hpp"

namespace ptstring {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::MatrixXd sine_transform(int M) {
  const double scale = std::sqrt(2.0 / (M + 1));
  Eigen::MatrixXd t(M, M);
  for (int j = 1; j <= M; ++j) {
    for (int k = j; k <= M; ++k) {
      // jk mod 2(M+1) keeps the argument small
      const long r = (static_cast<long>(j) * k) % (2L * (M + 1));
      t(j - 1, k - 1) = t(k - 1, j - 1) = scale * std::sin(kPi * r / (M + 1));
    }
  }
  return t;
}

CollocationGrid build(const DensityModel& model, int M) {
  if (M < 8) throw Error(ErrorCode::Parameter, "collocation needs M >= 8");
  CollocationGrid g;
  g.M = M;
  g.model = model;
  g.points.resize(M);
  g.density.resize(M);
  for (int j = 1; j <= M; ++j) {
    const double x = -0.5 + static_cast<double>(j) / (M + 1);
    g.points[j - 1] = x;
    g.density[j - 1] = model(x);
    if (std::abs(g.density[j - 1]) < 1e-12) {
      throw Error(ErrorCode::DensityZero, "density vanishes at a collocation node");
    }
  }
  for (int j = 1; j < M; ++j) {
    const cplx a = g.density[j - 1];
    const cplx b = g.density[j];
    // jump across the negative real axis flips the sign of the principal argument
    if (a.real() < 0 && b.real() < 0 && (a.imag() < 0) != (b.imag() < 0)) g.branch_warning = true;
  }

  const Eigen::MatrixXd t = sine_transform(M);
  Eigen::VectorXd lambda(M);
  for (int k = 1; k <= M; ++k) lambda(k - 1) = (k * kPi) * (k * kPi);
  const Eigen::MatrixXd laplacian = t * lambda.asDiagonal() * t;

  Eigen::VectorXcd s(M);
  for (int j = 0; j < M; ++j) s(j) = 1.0 / std::sqrt(g.density[j]);
  g.operator_matrix = s.asDiagonal() * laplacian.cast<cplx>() * s.asDiagonal();
  return g;
}

ComplexSpectrum spectrum_collocation(const CollocationGrid& grid, int count,
                                     double reality_tolerance,
                                     std::optional<Ordering> ordering) {
  const int M = grid.M;
  if (count < 1 || count > M) throw Error(ErrorCode::Parameter, "count must lie in [1, M]");

  const Eigen::MatrixXd t = sine_transform(M);
  Eigen::VectorXd inv_root(M);
  for (int k = 1; k <= M; ++k) inv_root(k - 1) = 1.0 / (k * kPi);
  Eigen::VectorXd re(M), im(M);
  for (int j = 0; j < M; ++j) {
    re(j) = grid.density[j].real();
    im(j) = grid.density[j].imag();
  }
  Eigen::MatrixXd a_re = inv_root.asDiagonal() * (t * re.asDiagonal() * t) * inv_root.asDiagonal();
  Eigen::MatrixXd a_im = inv_root.asDiagonal() * (t * im.asDiagonal() * t) * inv_root.asDiagonal();

  std::vector<cplx> raw;
  raw.reserve(M);
  auto push = [&](cplx mu) {
    raw.push_back(mu == cplx{} ? cplx{std::numeric_limits<double>::infinity(), 0.0} : 1.0 / mu);
  };

  // i^{k-l} A_kl is real for PT densities: the real part survives where k-l
  // is even, the imaginary part (with sign) where it is odd.
  const double scale = std::max(a_re.cwiseAbs().maxCoeff(), a_im.cwiseAbs().maxCoeff());
  double leak = 0.0;
  Eigen::MatrixXd phased(M, M);
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < M; ++l) {
      const int d = ((k - l) % 4 + 4) % 4;
      const cplx v = cplx(a_re(k, l), a_im(k, l)) * std::pow(cplx(0, 1), d);
      phased(k, l) = v.real();
      leak = std::max(leak, std::abs(v.imag()));
    }
  }
  if (std::abs(a_im.maxCoeff()) == 0.0 && a_im.minCoeff() == 0.0) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a_re, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "eigen solver failed");
    for (const cplx& mu : solver.eigenvalues()) push(mu);
  } else if (leak <= 1e-12 * scale) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(phased, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "eigen solver failed");
    for (const cplx& mu : solver.eigenvalues()) push(mu);
  } else {
    Eigen::MatrixXcd a(M, M);
    a.real() = a_re;
    a.imag() = a_im;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "eigen solver failed");
    for (const cplx& mu : solver.eigenvalues()) push(mu);
  }

  ComplexSpectrum full = classify(raw, reality_tolerance,
                                  ordering.value_or(default_ordering(grid.model.kind())));
  // keep the first `count`, re-deriving pairs so a split pair is not left dangling
  std::vector<cplx> head(full.eigenvalues.begin(), full.eigenvalues.begin() + count);
  ComplexSpectrum out = classify(head, reality_tolerance, full.ordering);
  out.truncation = M;
  out.model = grid.model;
  return out;
}

}  // namespace ptstring
