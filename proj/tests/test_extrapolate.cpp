#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ptstring/collocation.hpp"
#include "ptstring/errors.hpp"
#include "ptstring/extrapolate.hpp"
#include "ptstring/sumrules.hpp"

using namespace ptstring;

namespace {
constexpr double kPi = std::numbers::pi;

double colloc_e1(double alpha) {
  return spectrum_collocation(build(DensityModel::linear_pt(alpha), 400), 1).eigenvalues[0].real();
}
}  // namespace

TEST_CASE("Shanks basics") {
  const auto c = shanks(std::vector<double>{5, 5, 5});
  REQUIRE(c.size() == 1);
  REQUIRE(c[0].has_value());
  CHECK(*c[0] == 5.0);
  CHECK(shanks_table({2, 2, 2, 2, 2, 2, 2}, 3).last(3) == 2.0);
  // a vanishing denominator without convergence is a gap
  CHECK_FALSE(shanks(std::vector<double>{1, 2, 3})[0].has_value());
  CHECK_THROWS_AS(shanks(std::vector<double>{1, 2}), Error);

  std::vector<double> geo;
  double acc = 0.0;
  for (int k = 0; k < 5; ++k) geo.push_back(acc += std::pow(0.5, k));
  const auto g = shanks(geo);
  CHECK(g.size() == 3);
  for (const auto& v : g) CHECK(std::abs(*v - 2.0) <= 1e-12);

  std::vector<double> leibniz;
  acc = 0.0;
  for (int k = 0; k < 5; ++k) leibniz.push_back(acc += 4.0 * (k % 2 ? -1 : 1) / (2 * k + 1));
  const auto t = shanks_table(leibniz, 2);
  CHECK(std::abs(*t.last(1) - kPi) < std::abs(leibniz.back() - kPi));
  CHECK(std::abs(*t.last(2) - kPi) < std::abs(*t.last(1) - kPi));

  // L + c q^n
  std::vector<double> lin;
  for (int n = 0; n < 7; ++n) lin.push_back(3.0 - 0.7 * std::pow(-0.4, n));
  for (const auto& v : shanks(lin)) CHECK(std::abs(*v - 3.0) <= 1e-12);
}

TEST_CASE("table shape") {
  std::vector<double> seq{1, 3, 2, 5, 4, 7, 6, 9, 8};
  const auto t = shanks_table(seq, 4);
  REQUIRE(t.levels.size() == 5);
  for (int k = 0; k <= 4; ++k) CHECK(t.levels[k].size() == 9u - 2 * k);
  CHECK(t.base_sequence == seq);
}

TEST_CASE("gaps propagate") {
  Sequence<double> s{1.0, std::nullopt, 2.0, 2.5, 2.75};
  const auto out = shanks(s);
  CHECK_FALSE(out[0].has_value());
  CHECK_FALSE(out[1].has_value());
  CHECK(out[2].has_value());
}

TEST_CASE("uniform limit") {
  for (int k = 0; k <= 3; ++k) {
    CHECK(std::abs(e1_estimate(0.0, k) - kPi * kPi) <= (k == 3 ? 1e-6 : 1.0));
  }
  double prev = 1e300;
  for (int k = 0; k <= 3; ++k) {
    const double err = std::abs(e1_estimate(0.0, k) - kPi * kPi);
    CHECK(err <= prev);
    prev = err;
  }
}

TEST_CASE("E1 estimates against collocation") {
  CHECK(std::abs(e1_estimate(2.0, 3) / colloc_e1(2.0) - 1.0) <= 1e-3);
  const double near = e1_estimate(4.3, 3);
  CHECK(std::isfinite(near));
  CHECK(std::abs(near / colloc_e1(4.3) - 1.0) <= 5e-2);
  CHECK_THROWS_AS(e1_estimate(2.0, 5), Error);
}

TEST_CASE("estimates sit inside the sandwich bounds") {
  for (double a : {0.5, 1.5, 2.5, 3.5}) {
    const auto b = eigenvalue_bounds(DensityModel::linear_pt(a), 8);
    const double e = e1_estimate(a, 3);
    CHECK(b.lower <= e);
    CHECK(e <= b.upper);
  }
}

TEST_CASE("negative sum rules are reported") {
  try {
    e1_base_sequence(8.0);
    FAIL("expected NegativeSumRule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeSumRule);
  }
}

TEST_CASE("singularity of the accelerated estimate") {
  const double a4 = singularity_estimate(4);
  CHECK(a4 >= 4.35);
  CHECK(a4 <= 4.46);
  CHECK(std::abs(a4 - 4.3971593563619) <= 0.05);
  const double a3 = singularity_estimate(3);
  CHECK(a3 >= 4.35);
  CHECK(a3 <= 4.46);
  // raw Z(9)^{-1/9} stays finite below the first critical point
  CHECK(singularity_estimate(0) > 4.3971593563619);
  CHECK_THROWS_AS(singularity_estimate(4, 1.0), Error);
}
