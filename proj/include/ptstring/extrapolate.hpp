#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ptstring/errors.hpp"

namespace ptstring {

/// Working precision for the accelerated E₁ estimates: the repeated transform
/// subtracts nearly equal numbers and loses most of double precision by level 3.
using Wide = boost::multiprecision::cpp_bin_float_50;

/// Gaps (nullopt) mark entries whose Shanks denominator vanished; they poison
/// every entry that depends on them.
template <class Real>
using Sequence = std::vector<std::optional<Real>>;

/// One Shanks step, S_n = (A_{n+1}A_{n-1} − A_n²)/(A_{n+1} + A_{n-1} − 2A_n).
/// Denominators below 50ε·max|A| become gaps, unless the three terms are equal
/// (a constant run maps to itself). Throws Parameter if len < 3.
template <class Real>
Sequence<Real> shanks(const Sequence<Real>& seq) {
  using std::abs;
  if (seq.size() < 3) throw Error(ErrorCode::Parameter, "Shanks needs at least 3 terms");
  Sequence<Real> out(seq.size() - 2);
  for (std::size_t n = 1; n + 1 < seq.size(); ++n) {
    if (!seq[n - 1] || !seq[n] || !seq[n + 1]) continue;
    const Real& a0 = *seq[n - 1];
    const Real& a1 = *seq[n];
    const Real& a2 = *seq[n + 1];
    const Real den = a2 + a0 - 2 * a1;
    Real scale = abs(a0);
    if (abs(a1) > scale) scale = abs(a1);
    if (abs(a2) > scale) scale = abs(a2);
    const Real floor = 50 * std::numeric_limits<Real>::epsilon() * scale;
    if (abs(den) <= floor) {
      // a locally constant run has already converged; anything else is a gap
      if (abs(a2 - a1) <= floor && abs(a1 - a0) <= floor) out[n - 1] = a1;
      continue;
    }
    out[n - 1] = (a2 * a0 - a1 * a1) / den;
  }
  return out;
}

std::vector<std::optional<double>> shanks(const std::vector<double>& seq);

struct ShanksTable {
  std::vector<double> base_sequence;
  std::vector<std::vector<std::optional<double>>> levels;  ///< levels[0] is the base
  /// Last valid entry of a level, if any.
  std::optional<double> last(int level) const;
};

/// Repeated transform down to `depth` levels (or as far as the length allows).
ShanksTable shanks_table(const std::vector<double>& seq, int depth);

/// A_s = Z(s)^{-1/s}, s = 1..9, for the linear density. Throws NegativeSumRule
/// if some Z(s) <= 0 at this α.
std::vector<Wide> e1_base_sequence(double alpha);

/// Lowest-eigenvalue estimate after `depth` (0..4) Shanks levels.
double e1_estimate(double alpha, int depth);

/// Smallest α > 0 where the depth-limited estimate has a pole. For depth >= 1
/// this is a zero of the final-level denominator carrying a nonzero residue;
/// removable zeros (numerator vanishing too) are skipped. For depth 0 the raw
/// Z(9)^{-1/9} blows up where Z(9) reaches zero. Throws NoSingularity if
/// nothing is found in (0, alpha_max].
double singularity_estimate(int depth = 4, double alpha_max = 10.0);

}  // namespace ptstring
