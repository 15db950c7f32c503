#include "ptstring/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "ptstring/errors.hpp"

namespace ptstring {

namespace {

constexpr double kJacobianStep = 1e-7;

struct Residuals {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<double>& x;
  const std::vector<double>& y;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(x.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    for (std::size_t k = 0; k < x.size(); ++k) r(k) = p(0) + p(1) * std::pow(x[k], -p(2)) - y[k];
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    Eigen::VectorXd base(values()), shifted(values());
    (*this)(p, base);
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd q = p;
      const double h = kJacobianStep * std::max(1.0, std::abs(p(j)));
      q(j) += h;
      (*this)(q, shifted);
      jac.col(j) = (shifted - base) / h;
    }
    return 0;
  }
};

}  // namespace

FitResult fit_critical(const std::vector<std::pair<double, double>>& alpha_e,
                       FitOrientation orientation) {
  if (alpha_e.size() < 4) throw Error(ErrorCode::Parameter, "fit needs at least 4 points");
  std::vector<double> x, y;
  for (const auto& [alpha, e] : alpha_e) {
    const bool forward = orientation == FitOrientation::AlphaOfE;
    x.push_back(std::abs(forward ? e : alpha));
    y.push_back(forward ? alpha : e);
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (*xmax - *xmin <= 1e-12 * *xmax || *xmin == 0.0) {
    throw Error(ErrorCode::DegenerateData, "fit abscissae are degenerate");
  }
  const std::size_t first = static_cast<std::size_t>(xmin - x.begin());
  const std::size_t last = static_cast<std::size_t>(xmax - x.begin());

  Residuals fn{x, y};
  Eigen::VectorXd best;
  double best_rss = std::numeric_limits<double>::infinity();
  for (double s0 : {0.25, 0.5, 1.0, 2.0}) {
    const double b0 = *std::min_element(y.begin(), y.end());
    // c from the two extreme abscissae with s fixed
    const double c0 = (y[first] - y[last]) / (std::pow(x[first], -s0) - std::pow(x[last], -s0));
    Eigen::VectorXd p(3);
    p << b0, c0, s0;
    Eigen::LevenbergMarquardt<Residuals> lm(fn);
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = 4000;
    lm.minimize(p);
    Eigen::VectorXd r(fn.values());
    fn(p, r);
    const double rss = r.squaredNorm();
    if (!std::isfinite(rss)) continue;
    const bool tie = std::abs(rss - best_rss) <= 1e-12 * std::max(rss, 1e-300);
    if (rss < best_rss && !tie) {
      best_rss = rss;
      best = p;
    } else if (tie && p(2) < best(2)) {
      best = p;
    }
  }
  if (best.size() != 3) throw Error(ErrorCode::NonConvergence, "every fit start diverged");

  FitResult out;
  out.b = best(0);
  out.c = best(1);
  out.s = best(2);
  out.orientation = orientation;
  out.points_used = alpha_e;
  const double m = static_cast<double>(x.size());
  out.residual_norm = std::sqrt(best_rss / m);

  Eigen::MatrixXd jac(fn.values(), 3);
  fn.df(best, jac);
  const Eigen::Matrix3d normal = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
  if (!lu.isInvertible()) throw Error(ErrorCode::DegenerateData, "fit Jacobian is singular");
  const Eigen::Matrix3d cov = lu.inverse() * (best_rss / std::max(1.0, m - 3.0));
  out.sigma_b = std::sqrt(std::abs(cov(0, 0)));
  out.sigma_c = std::sqrt(std::abs(cov(1, 1)));
  out.sigma_s = std::sqrt(std::abs(cov(2, 2)));
  return out;
}

FitResult fit_critical(const std::vector<CriticalPoint>& points, FitOrientation orientation) {
  std::vector<std::pair<double, double>> data;
  for (const auto& p : points) {
    if (p.branch != points.front().branch) {
      throw Error(ErrorCode::WrongBranch, "fit points must come from a single branch");
    }
    data.emplace_back(p.alpha_c, p.e_c);
  }
  return fit_critical(data, orientation);
}

double constant_fit_residual(const FitResult& fit) {
  std::vector<double> y;
  for (const auto& [alpha, e] : fit.points_used) {
    y.push_back(fit.orientation == FitOrientation::AlphaOfE ? alpha : e);
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(y.size()));
}

ConjectureCheck conjecture_check(const std::vector<CriticalPoint>& points) {
  if (points.size() < 4) throw Error(ErrorCode::Parameter, "conjecture check needs 4 points");
  ConjectureCheck out;
  for (const auto& p : points) {
    if (p.branch != Branch::PositiveE || p.e_c <= 0) {
      throw Error(ErrorCode::WrongBranch, "conjecture applies to the positive-e branch");
    }
    const double d = std::abs(p.alpha_c - 2.0 - 1.0 / std::sqrt(2.0 * p.e_c)) / p.alpha_c;
    out.deviations.push_back(d);
    out.max_deviation = std::max(out.max_deviation, d);
  }
  return out;
}

}  // namespace ptstring
