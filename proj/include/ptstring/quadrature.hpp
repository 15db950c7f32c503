#pragma once

#include <cmath>
#include <cstdlib>
#include <span>
#include <utility>
#include <vector>

#include "ptstring/errors.hpp"

namespace ptstring {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n; cached per n.
const GaussRule& gauss_legendre(int n);

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_panels = 1 << 14;
  int initial_panels = 1;
};

inline constexpr int kPanelNodes = 16;

namespace detail {

template <class F>
auto panel_rule(F& f, double a, double b) {
  static const GaussRule& rule = gauss_legendre(kPanelNodes);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto sum = rule.weights[0] * f(mid + half * rule.nodes[0]);
  for (std::size_t k = 1; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return half * sum;
}

}  // namespace detail

/// Adaptive panel Gauss-Legendre on [a, b] (16 nodes per panel). A panel is
/// accepted when its two halves agree with it to the panel's share of
/// abs_tol. Works for any value type with +, * by double and std::abs.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  using Value = decltype(f(a));
  Value total{};
  if (a == b) return total;
  const double length = b - a;
  struct Panel {
    double lo, hi;
    Value estimate;
  };
  std::vector<Panel> stack;
  const int start = std::max(1, opt.initial_panels);
  for (int k = start - 1; k >= 0; --k) {
    const double lo = a + length * k / start;
    const double hi = a + length * (k + 1) / start;
    stack.push_back({lo, hi, detail::panel_rule(f, lo, hi)});
  }
  int panels = start;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    Value left = detail::panel_rule(f, p.lo, mid);
    Value right = detail::panel_rule(f, mid, p.hi);
    const double share = opt.abs_tol * std::abs((p.hi - p.lo) / length);
    if (std::abs(left + right - p.estimate) <= share ||
        std::abs(p.hi - p.lo) < 1e-15 * std::abs(length)) {
      total += left + right;
      continue;
    }
    panels += 1;
    if (panels > opt.max_panels) {
      throw Error(ErrorCode::Quadrature,
                  "adaptive quadrature did not reach tolerance within the panel budget");
    }
    stack.push_back({mid, p.hi, right});
    stack.push_back({p.lo, mid, left});
  }
  return total;
}

/// Fixed n-point Gauss-Legendre rule on [a, b].
template <class F>
auto integrate_fixed(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto sum = rule.weights[0] * f(mid + half * rule.nodes[0]);
  for (std::size_t k = 1; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return half * sum;
}

}  // namespace ptstring
