#include "ptstring/sumrules.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "ptstring/errors.hpp"
#include "ptstring/quadrature.hpp"

namespace ptstring {

namespace {

using boost::multiprecision::cpp_int;
using Table = std::vector<std::vector<std::pair<const char*, const char*>>>;

// Coefficients of α^0, α^2, α^4, ... for s = 1, 2, ...
const Table kLinear = {
    {{"1", "6"}},
    {{"1", "90"}, {"-1", "5040"}},
    {{"1", "945"}, {"-1", "30240"}},
    {{"1", "9450"}, {"-17", "3742200"}, {"197", "10897286400"}},
    {{"1", "93555"}, {"-59", "102162060"}, {"17", "3269185920"}},
    {{"691", "638512875"}, {"-359", "5108103000"}, {"16771", "16672848192000"},
     {"-2341", "1364608498176000"}},
    {{"2", "18243225"}, {"-1237", "148864716000"}, {"46667", "285105704083200"},
     {"-15773", "22808456326656000"}},
    {{"3617", "325641566250"}, {"-68197", "70871446327500"}, {"736579", "30490471131120000"},
     {"-689371", "3986227909984320000"}, {"8458133", "51894121836144107520000"}},
    {{"43867", "38979295480125"}, {"-627073", "5716963337085000"},
     {"5281763", "1577881881035460000"}, {"-114268283", "3308250267054186854400"},
     {"111789019", "1323300106821674741760000"}},
};

const Table kQuadratic = {
    {{"1", "6"}, {"-1", "120"}},
    {{"1", "90"}, {"-1", "630"}, {"1", "50400"}},
    {{"1", "945"}, {"-1", "4200"}, {"1", "92400"}, {"-29", "432432000"}},
    {{"1", "9450"}, {"-1", "31185"}, {"1499", "567567000"}, {"-23", "378378000"},
     {"251", "1029188160000"}},
    {{"1", "93555"}, {"-691", "170270100"}, {"83", "170270100"}, {"-3313", "154378224000"},
     {"773", "2514159648000"}, {"-3221", "3519823507200000"}},
    {{"691", "638512875"}, {"-1", "2027025"}, {"15047", "192972780000"},
     {"-1204631", "230988417660000"}, {"1646627", "11292767085600000"},
     {"-759931", "519467285937600000"}, {"16965349", "4862213796375936000000"}},
    {{"2", "18243225"}, {"-3617", "62026965000"}, {"565843", "49497518070000"},
     {"-7523137", "7259635983600000"}, {"3219703", "71559268981200000"},
     {"-460458127", "520951478183136000000"}, {"211469", "31572816859584000000"},
     {"-5405503", "402869143128291840000000"}},
};

std::vector<std::vector<Rational>> parse(const Table& table) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : table) {
    std::vector<Rational> coeffs;
    for (const auto& [num, den] : row) coeffs.emplace_back(cpp_int(num), cpp_int(den));
    out.push_back(std::move(coeffs));
  }
  return out;
}

const std::vector<std::vector<Rational>>& table_for(DensityKind kind) {
  static const auto linear = parse(kLinear);
  static const auto quadratic = parse(kQuadratic);
  switch (kind) {
    case DensityKind::Uniform:
    case DensityKind::LinearPT:
      return linear;
    case DensityKind::QuadraticPT:
      return quadratic;
    default:
      throw Error(ErrorCode::Parameter,
                  "exact sum rules are tabulated only for LinearPT and QuadraticPT");
  }
}

}  // namespace

int max_sum_rule_order(DensityKind kind) {
  switch (kind) {
    case DensityKind::Uniform:
    case DensityKind::LinearPT:
      return static_cast<int>(kLinear.size());
    case DensityKind::QuadraticPT:
      return static_cast<int>(kQuadratic.size());
    default:
      return 0;
  }
}

const std::vector<Rational>& sum_rule_coefficients(DensityKind kind, int s) {
  const auto& table = table_for(kind);
  if (s < 1 || s > static_cast<int>(table.size())) {
    throw Error(ErrorCode::OutOfRange, "sum-rule order outside the tabulated range");
  }
  return table[s - 1];
}

Rational exact_sum_rule_rational(DensityKind kind, int s, const Rational& alpha) {
  const auto& coeffs = sum_rule_coefficients(kind, s);
  const Rational a2 = kind == DensityKind::Uniform ? Rational(0) : alpha * alpha;
  Rational acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * a2 + *it;
  return acc;
}

SumRuleValue exact_sum_rule(DensityKind kind, int s, double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::Parameter, "alpha must be finite");
  const Rational value = exact_sum_rule_rational(kind, s, Rational(alpha));
  return {s, cplx(static_cast<double>(value), 0.0), SumRuleMethod::Exact, 0};
}

SumRuleValue exact_sum_rule(const DensityModel& model, int s) {
  return exact_sum_rule(model.kind(), s, model.alpha());
}

SumRuleValue general_Z1(const DensityModel& model) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.initial_panels = 4;
  const cplx value = integrate(
      [&](double x) { return (0.25 - x * x) * model(x); }, -kHalfLength, kHalfLength, opt);
  return {1, value, SumRuleMethod::Exact, 0};
}

SumRuleValue trace_sum_rule(const PencilMatrices& pencil, int s, bool tail_correction) {
  if (s < 1) throw Error(ErrorCode::Parameter, "sum-rule order must be positive");
  const Eigen::MatrixXcd a = pencil.scaled_density();
  cplx value;
  if (s == 1) {
    value = a.trace();
  } else {
    Eigen::MatrixXcd power = a;
    for (int k = 2; k < s; ++k) power = power * a;
    // trace(P A) without forming the last product
    value = power.cwiseProduct(a.transpose()).sum();
  }
  if (tail_correction && s == 1) {
    const int n0 = pencil.dim;
    const int n1 = 4 * n0;
    const auto c = density_cosine_coefficients(pencil.model, 2 * n1);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    // Σ_{n>N} (c_0 − c_{2n}) / (n²π²); c_{2n} = O(n^-2) so its tail past 4N is negligible
    cplx tail = c[0] * boost::math::trigamma(static_cast<double>(n0 + 1)) / pi2;
    for (int n = n1; n > n0; --n) tail -= c[2 * n] / (pi2 * n * n);
    value += tail;
  } else if (tail_correction && s == 2) {
    // pairs (m, n) with max(m, n) > N, Σ_mn = c_|m-n| − c_{m+n}, out to 4N;
    // beyond that only the diagonal c_0²/(nπ)^4 survives
    const int n0 = pencil.dim;
    const int n1 = 4 * n0;
    const auto c = density_cosine_coefficients(pencil.model, 2 * n1);
    cplx missed = 0.0;
    for (int n = n1; n > n0; --n) {
      cplx row = 0.0;
      for (int m = 1; m <= n; ++m) {
        const cplx e = c[n - m] - c[n + m];
        row += (m == n ? 1.0 : 2.0) * e * e / (double(m) * m);
      }
      missed += row / (double(n) * n);
    }
    const double pi4 = std::pow(std::numbers::pi, 4);
    missed += c[0] * c[0] * boost::math::polygamma(3, n1 + 1.0) / 6.0;
    value += missed / pi4;
  }
  return {s, value, SumRuleMethod::Trace, pencil.dim};
}

EigenvalueBounds eigenvalue_bounds(const DensityModel& model, int s) {
  const int top = max_sum_rule_order(model.kind());
  if (s < 1 || s + 1 > top) {
    throw Error(ErrorCode::OutOfRange, "bounds need Z(s) and Z(s+1) in the tabulated range");
  }
  const Rational alpha(model.alpha());
  const Rational zs = exact_sum_rule_rational(model.kind(), s, alpha);
  const Rational zs1 = exact_sum_rule_rational(model.kind(), s + 1, alpha);
  EigenvalueBounds b;
  if (zs <= 0 || zs1 <= 0) {
    b.complex_signaled = true;
    return b;
  }
  b.lower = std::pow(static_cast<double>(zs), -1.0 / s);
  b.upper = static_cast<double>(Rational(zs / zs1));
  return b;
}

SpectralSum spectral_sum(const ComplexSpectrum& spectrum, int s, int K) {
  if (s < 2) throw Error(ErrorCode::Parameter, "direct spectral sums need s >= 2");
  if (K < 1 || K > static_cast<int>(spectrum.size())) {
    throw Error(ErrorCode::OutOfRange, "K exceeds the available spectrum");
  }
  SpectralSum out{};
  for (int n = 0; n < K; ++n) out.partial += std::pow(spectrum.eigenvalues[n], -s);

  QuadratureOptions opt;
  opt.initial_panels = 4;
  const double ell = integrate(
      [&](double x) { return std::sqrt(spectrum.model(x)).real(); }, -kHalfLength, kHalfLength,
      opt);
  // Σ_{n>K} n^{-2s} = ζ(2s) − Σ_{n<=K} n^{-2s}, summed explicitly to 100K then bounded by an integral
  double tail = 0.0;
  const int stop = 100 * K;
  for (int n = stop; n > K; --n) tail += std::pow(static_cast<double>(n), -2 * s);
  tail += std::pow(static_cast<double>(stop), 1 - 2 * s) / (2 * s - 1);
  out.tail = tail * std::pow(ell / std::numbers::pi, 2 * s);
  return out;
}

std::string to_fraction(const Rational& r) {
  const cpp_int num = numerator(r);
  const cpp_int den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace ptstring
