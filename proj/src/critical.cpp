#include "ptstring/critical.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ptstring/discretize.hpp"
#include "ptstring/errors.hpp"
#include "ptstring/parallel.hpp"
#include "ptstring/spectrum.hpp"

namespace ptstring {

namespace {

constexpr double kCountTolerance = 1e-8;
constexpr double kNegativeWindow = 10.0;
constexpr int kMaxIterations = 50;
constexpr double kStepTolerance = 1e-14;
constexpr double kNoiseFloorStep = 1e-7;

ComplexSpectrum solve(const DensityModel& model, double alpha, int N) {
  return spectrum(assemble(model.with_alpha(alpha), N), kCountTolerance);
}

// Real eigenvalues of the branch among the candidate window, ascending.
std::vector<double> branch_reals(const ComplexSpectrum& s, Branch branch, int K) {
  std::vector<double> out;
  const int limit = std::min<int>(K, static_cast<int>(s.size()));
  for (int k = 0; k < limit; ++k) {
    if (s.tags[k] != EigenTag::Real) continue;
    const double e = s.eigenvalues[k].real();
    if (branch == Branch::NegativeE ? (e < 0 && -e <= kNegativeWindow) : e > 0) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool predicate(const ComplexSpectrum& s, Branch branch, int n) {
  if (branch == Branch::PositiveE) return s.count_real(2 * n) == 2 * n;
  return static_cast<int>(branch_reals(s, branch, static_cast<int>(s.size())).size()) >= 2 * n;
}

// Mean of the closest adjacent pair of branch eigenvalues: the pair about to coalesce.
double coalescing_mean(const ComplexSpectrum& s, Branch branch, int n) {
  const auto e = branch_reals(s, branch, branch == Branch::PositiveE ? 2 * n : static_cast<int>(s.size()));
  if (e.size() < 2) throw Error(ErrorCode::NoTransition, "no real pair to seed Newton");
  std::size_t best = 0;
  for (std::size_t k = 1; k + 1 < e.size(); ++k) {
    if (e[k + 1] - e[k] < e[best + 1] - e[best]) best = k;
  }
  return 0.5 * (e[best] + e[best + 1]);
}

struct Secular {
  double f;   // F̂
  double fe;  // ∂F̂/∂E
};

Eigen::MatrixXd real_matrix(const DensityModel& model, double alpha, int N) {
  auto rf = real_form(assemble(model.with_alpha(alpha), N));
  if (!rf) throw Error(ErrorCode::Parameter, "secular determinant is not real on the real axis");
  return std::move(rf->matrix);
}

Secular secular(const Eigen::MatrixXd& b, double e) {
  const Eigen::Index n = b.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - e * b;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double f = lu.determinant();
  if (!std::isfinite(f)) throw Error(ErrorCode::NonConvergence, "secular determinant overflow");
  // F̂_E = −F̂ tr[M^{-1} B]
  const double tr = lu.solve(b).trace();
  return {f, -f * tr};
}

}  // namespace

std::string to_string(Branch branch) {
  return branch == Branch::PositiveE ? "pos" : "neg";
}

Branch branch_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "pos" || s == "positive" || s == "positivee") return Branch::PositiveE;
  if (s == "neg" || s == "negative" || s == "negativee") return Branch::NegativeE;
  throw Error(ErrorCode::Config, "unknown branch '" + name + "' (expected pos or neg)");
}

int count_real(const DensityModel& model, double alpha, int N, int K) {
  if (K < 1 || K > N) throw Error(ErrorCode::Parameter, "count_real needs 1 <= K <= N");
  return solve(model, alpha, N).count_real(K);
}

bool pair_is_real(const DensityModel& model, Branch branch, int pair_index, double alpha, int N) {
  return predicate(solve(model, alpha, N), branch, pair_index);
}

AlphaBracket bracket_and_bisect(const DensityModel& model, int pair_index, double alpha_lo,
                                double alpha_hi, int N, Branch branch) {
  if (pair_index < 1) throw Error(ErrorCode::Parameter, "pair index must be positive");
  if (!(alpha_lo < alpha_hi)) throw Error(ErrorCode::Parameter, "need alpha_lo < alpha_hi");
  const bool at_lo = pair_is_real(model, branch, pair_index, alpha_lo, N);
  const bool at_hi = pair_is_real(model, branch, pair_index, alpha_hi, N);
  if (at_lo == at_hi) throw Error(ErrorCode::NoTransition, "pair reality does not change in bracket");
  double lo = alpha_lo;
  double hi = alpha_hi;
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (pair_is_real(model, branch, pair_index, mid, N) == at_lo ? lo : hi) = mid;
  }
  return {lo, hi};
}

CriticalPoint newton_refine(const DensityModel& model, double alpha0, double E0, int N) {
  double alpha = alpha0;
  double e = E0;

  auto residuals = [&](double a, double x) { return secular(real_matrix(model, a, N), x); };

  Secular g = residuals(alpha, e);
  const double scale_f = std::max(std::abs(g.f), std::numeric_limits<double>::min());
  const double scale_fe = std::max(std::abs(g.fe), std::numeric_limits<double>::min());
  auto merit = [&](const Secular& s) { return std::hypot(s.f / scale_f, s.fe / scale_fe); };

  CriticalPoint cp;
  cp.trunc_N = N;
  bool converged = false;
  double prev_step = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < kMaxIterations && !converged; ++it) {
    const double he = 1e-5 * std::max(1.0, std::abs(e));
    const double ha = 1e-5 * std::max(1.0, std::abs(alpha));
    const Eigen::MatrixXd b = real_matrix(model, alpha, N);
    const Eigen::MatrixXd b_up = real_matrix(model, alpha + ha, N);
    const Eigen::MatrixXd b_dn = real_matrix(model, alpha - ha, N);
    const Secular up_e = secular(b, e + he);
    const Secular dn_e = secular(b, e - he);
    const Secular up_a = secular(b_up, e);
    const Secular dn_a = secular(b_dn, e);
    const double f_ee = (up_e.fe - dn_e.fe) / (2 * he);
    const double f_a = (up_a.f - dn_a.f) / (2 * ha);
    const double f_ea = (up_a.fe - dn_a.fe) / (2 * ha);

    Eigen::Matrix2d jac;
    jac << g.fe, f_a, f_ee, f_ea;
    const double det = jac.determinant();
    if (!std::isfinite(det) || std::abs(det) <= 1e-300 ||
        std::abs(det) <= 1e-14 * jac.cwiseAbs().maxCoeff() * jac.cwiseAbs().maxCoeff()) {
      throw Error(ErrorCode::NonConvergence, "critical-point Jacobian is singular");
    }
    const Eigen::Vector2d step = jac.lu().solve(Eigen::Vector2d(-g.f, -g.fe));

    // damped update: halve until the scaled residual does not grow
    double t = 1.0;
    Secular trial{};
    const double m0 = merit(g);
    for (int k = 0; k < 12; ++k, t *= 0.5) {
      trial = residuals(alpha + t * step(1), e + t * step(0));
      if (merit(trial) <= m0 || k == 11) break;
    }
    e += t * step(0);
    alpha += t * step(1);
    g = trial;
    if (!std::isfinite(alpha) || !std::isfinite(e)) {
      throw Error(ErrorCode::NonConvergence, "Newton iterate diverged");
    }
    const double rel_step = std::max(std::abs(t * step(0)) / std::max(1.0, std::abs(e)),
                                     std::abs(t * step(1)) / std::max(1.0, std::abs(alpha)));
    // Quadratic convergence stalls only at the roundoff floor: a small step
    // that fails to shrink is noise.
    converged = rel_step <= kStepTolerance ||
                (prev_step <= kNoiseFloorStep && rel_step >= 0.5 * prev_step);
    prev_step = rel_step;
  }

  cp.iterations = it;
  cp.log_abs_F = std::log(std::abs(g.f));
  cp.log_abs_FE = std::log(std::abs(g.fe));
  if (converged) {
    cp.alpha_c = alpha;
    cp.e_c = e;
  } else {
    cp.alpha_c = alpha0;
    cp.e_c = E0;
    cp.degraded = true;
  }
  cp.branch = cp.e_c < 0 ? Branch::NegativeE : Branch::PositiveE;
  return cp;
}

namespace {

// Bracket, seed and refine one point. `hint` narrows the search when a
// neighbouring truncation already located it.
CriticalPoint locate(const DensityModel& model, Branch branch, int n, int N, AlphaBracket coarse) {
  const AlphaBracket br = bracket_and_bisect(model, n, coarse.lo, coarse.hi, N, branch);
  // positive branches are real below the transition, negative ones above
  const double real_side = branch == Branch::PositiveE ? br.lo : br.hi;
  const double seed = coalescing_mean(solve(model, real_side, N), branch, n);
  CriticalPoint cp = newton_refine(model, real_side, seed, N);
  cp.index = n;
  cp.branch = branch;
  return cp;
}

AlphaBracket scan(const DensityModel& model, Branch branch, int n, int N, double start,
                  double step, double limit) {
  // positive: walk down from a point where the pair is complex until it is real
  // negative: walk up from a point where the pair is absent until it appears
  double a = start;
  const bool want = true;
  for (double prev = a; std::abs(a - start) <= limit; prev = a) {
    a = branch == Branch::PositiveE ? a - step : a + step;
    if (branch == Branch::PositiveE && a <= 0) a = 1e-3;
    if (pair_is_real(model, branch, n, a, N) == want) {
      return branch == Branch::PositiveE ? AlphaBracket{a, prev} : AlphaBracket{prev, a};
    }
    if (a == 1e-3) break;
  }
  throw Error(ErrorCode::NoTransition, "no critical point found while scanning alpha");
}

}  // namespace

std::vector<CriticalPoint> critical_sequence(const DensityModel& model, int count, int N,
                                             Branch branch) {
  if (count < 1 || count > 12) throw Error(ErrorCode::Parameter, "count must lie in 1..12");
  if (model.kind() != DensityKind::LinearPT && model.kind() != DensityKind::QuadraticPT) {
    throw Error(ErrorCode::Parameter, "critical points are defined for LinearPT and QuadraticPT");
  }
  if (model.kind() == DensityKind::LinearPT && branch == Branch::NegativeE) {
    throw Error(ErrorCode::WrongBranch, "the linear density has no negative-e branch");
  }

  std::vector<CriticalPoint> points;
  if (branch == Branch::PositiveE) {
    // pair 1 is the last to go complex: walk up until it does
    double a = 0.0;
    const double up = 0.05;
    while (pair_is_real(model, branch, 1, a + up, N)) {
      a += up;
      if (a > 100.0) throw Error(ErrorCode::NoTransition, "pair 1 stays real up to alpha = 100");
    }
    points.push_back(locate(model, branch, 1, N, {a, a + up}));
    for (int n = 2; n <= count; ++n) {
      const AlphaBracket coarse = scan(model, branch, n, N, points.back().alpha_c, 0.01, 10.0);
      points.push_back(locate(model, branch, n, N, coarse));
    }
  } else {
    double start = 1.0;
    for (int n = 1; n <= count; ++n) {
      const AlphaBracket coarse = scan(model, branch, n, N, start, 1.0, 200.0);
      points.push_back(locate(model, branch, n, N, coarse));
      start = points.back().alpha_c;
    }
  }

  // validation at 3N/2, one task per point
  const int fine = 3 * N / 2;
  std::vector<double> check(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int k) {
    const CriticalPoint& p = points[k];
    const double w = 1e-4 * std::max(1.0, p.alpha_c);
    check[k] = locate(model, branch, p.index, fine, {p.alpha_c - w, p.alpha_c + w}).alpha_c;
  });
  for (std::size_t k = 0; k < points.size(); ++k) {
    points[k].alpha_check = check[k];
    if (std::abs(check[k] - points[k].alpha_c) > 1e-6 * std::max(1.0, std::abs(check[k]))) {
      throw Error(ErrorCode::TruncationMismatch,
                  "critical point " + std::to_string(k + 1) + " moves by more than 1e-6 between N=" +
                      std::to_string(N) + " and N=" + std::to_string(fine));
    }
  }
  return points;
}

}  // namespace ptstring
