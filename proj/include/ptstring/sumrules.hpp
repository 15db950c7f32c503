#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ptstring/discretize.hpp"
#include "ptstring/spectrum.hpp"

namespace ptstring {

using Rational = boost::multiprecision::cpp_rational;

enum class SumRuleMethod { Exact, Trace };

/// Z(s) = Σ_n E_n^{-s}.
struct SumRuleValue {
  int s = 1;
  cplx value;
  SumRuleMethod method = SumRuleMethod::Exact;
  int trunc_N = 0;  ///< Trace only
};

/// Highest tabulated order: 9 for LinearPT (and Uniform), 7 for QuadraticPT, 0 otherwise.
int max_sum_rule_order(DensityKind kind);

/// Coefficients of Z(s) in powers of α², ascending. Throws OutOfRange / Parameter.
const std::vector<Rational>& sum_rule_coefficients(DensityKind kind, int s);

/// Z(s; α) in exact arithmetic.
Rational exact_sum_rule_rational(DensityKind kind, int s, const Rational& alpha);

/// Z(s; α) evaluated in any floating type constructible from a big integer.
template <class Real>
Real exact_sum_rule_as(DensityKind kind, int s, const Real& alpha) {
  const auto& coeffs = sum_rule_coefficients(kind, s);
  const Real a2 = alpha * alpha;
  Real acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    const Real term = Real(numerator(*it)) / Real(denominator(*it));
    acc = acc * a2 + term;
  }
  return acc;
}

/// Exact value at a double α (converted to a rational without rounding).
SumRuleValue exact_sum_rule(DensityKind kind, int s, double alpha);
SumRuleValue exact_sum_rule(const DensityModel& model, int s);

/// ∫ (1/4 − x²) Σ(x) dx; real for PT densities since only Re Σ contributes.
SumRuleValue general_Z1(const DensityModel& model);

/// trace[(D^{-1} Σ)^s]. With tail_correction the contributions dropped by
/// the truncation are added back: exactly for s = 1 (N^{-1} -> N^{-4}); for
/// s = 2 the omitted pairs Σ_mn² / (m²n²π⁴) are summed out to 4N. Higher orders
/// already converge like N^{-5} and are left alone.
SumRuleValue trace_sum_rule(const PencilMatrices& pencil, int s, bool tail_correction = false);

/// Sandwich Z(s)^{-1/s} <= E₁ <= Z(s)/Z(s+1), valid while the spectrum is real and positive.
struct EigenvalueBounds {
  bool complex_signaled = false;  ///< Z(s) or Z(s+1) <= 0
  double lower = 0.0;
  double upper = 0.0;
};
EigenvalueBounds eigenvalue_bounds(const DensityModel& model, int s);

/// Σ_{n<=K} E_n^{-s} plus a Weyl estimate Σ_{n>K} (ℓ/(nπ))^{2s} of the
/// remainder, with ℓ = ∫ Re √Σ dx. Only for s >= 2.
struct SpectralSum {
  cplx partial;
  double tail;
};
SpectralSum spectral_sum(const ComplexSpectrum& spectrum, int s, int K);

/// "p/q" (or "p" when q = 1).
std::string to_fraction(const Rational& r);

}  // namespace ptstring
