#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ptstring/discretize.hpp"
#include "ptstring/errors.hpp"
#include "ptstring/quadrature.hpp"

using namespace ptstring;

namespace {
constexpr double kPi = std::numbers::pi;

double basis(int m, double x) { return std::numbers::sqrt2 * std::sin(m * kPi * (x + 0.5)); }
}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  const auto& r = gauss_legendre(64);
  double w = 0.0;
  for (double v : r.weights) w += v;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
  // exact for x^126
  CHECK(integrate_fixed([](double x) { return std::pow(x, 126); }, -1.0, 1.0, 64) ==
        doctest::Approx(2.0 / 127).epsilon(1e-13));
  CHECK(std::abs(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) - (std::exp(1.0) - 1)) < 1e-13);
  const cplx z = integrate([](double x) { return std::exp(cplx(0, 3) * x); }, 0.0, 1.0);
  CHECK(std::abs(z - (std::exp(cplx(0, 3)) - 1.0) / cplx(0, 3)) < 1e-13);
  QuadratureOptions tight;
  tight.max_panels = 4;
  tight.abs_tol = 1e-15;
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight), Error);
}

TEST_CASE("uniform pencil") {
  const auto p = assemble(DensityModel::uniform(), 4);
  CHECK((p.density_matrix - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);
  for (int n = 1; n <= 4; ++n) CHECK(p.stiffness(n - 1) == doctest::Approx(n * n * kPi * kPi));
  CHECK_THROWS_AS(assemble(DensityModel::uniform(), 1), Error);
}

TEST_CASE("closed-form moments against 64-point quadrature") {
  // X_12 = ∫ u_1 x u_2 dx
  const double x12 = integrate_fixed([](double x) { return basis(1, x) * x * basis(2, x); }, -0.5, 0.5, 64);
  CHECK(std::abs(sine_moment(1, 1, 2) - x12) <= 1e-14);
  const auto p = assemble(DensityModel::linear_pt(1.0), 2);
  CHECK(std::abs(p.density_matrix(0, 1) - cplx(0.0, x12)) <= 1e-14);

  for (int m = 1; m <= 16; ++m) {
    for (int n = 1; n <= 16; ++n) {
      for (int k : {0, 1, 2}) {
        const double q = integrate_fixed(
            [&](double x) { return basis(m, x) * std::pow(x, k) * basis(n, x); }, -0.5, 0.5, 64);
        CHECK(std::abs(sine_moment(k, m, n) - q) <= 1e-13);
      }
    }
  }

  for (const auto& model : {DensityModel::linear_pt(3.0), DensityModel::quadratic_pt(7.0)}) {
    const auto closed = assemble(model, 16, AssemblyMethod::ClosedForm);
    const auto quad = assemble(model, 16, AssemblyMethod::Quadrature);
    CHECK((closed.density_matrix - quad.density_matrix).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_FALSE(has_closed_form(DensityKind::PTBorg));
  CHECK_THROWS_AS(assemble(DensityModel::pt_borg(1.0), 4, AssemblyMethod::ClosedForm), Error);
}

TEST_CASE("pencil structure") {
  for (const auto& model : {DensityModel::linear_pt(2.0), DensityModel::quadratic_pt(30.0),
                            DensityModel::pt_borg(1.0), DensityModel::borg(1.0)}) {
    const auto p = assemble(model, 24);
    const auto& s = p.density_matrix;
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
    if (!model.pt_symmetric()) continue;
    for (int m = 0; m < 24; ++m) {
      for (int n = 0; n < 24; ++n) {
        const double zero = (m + n) % 2 ? s(m, n).real() : s(m, n).imag();
        CHECK(std::abs(zero) <= 1e-13);
      }
    }
  }
  // the diagonal of the linear density is exactly 1
  const auto lin = assemble(DensityModel::linear_pt(9.0), 12);
  for (int n = 0; n < 12; ++n) CHECK(lin.density_matrix(n, n) == cplx(1.0, 0.0));
}

TEST_CASE("real form") {
  CHECK_FALSE(real_form(assemble(DensityModel::uniform(), 4))->phased);
  CHECK_FALSE(real_form(assemble(DensityModel::borg(1.0), 8))->phased);
  CHECK(real_form(assemble(DensityModel::linear_pt(2.0), 8))->phased);
  CHECK_FALSE(real_form(assemble(DensityModel::solvable_family(1.0, cplx(2.0, 1.0), 0.0), 8)).has_value());
}

TEST_CASE("secular determinant") {
  const auto u3 = assemble(DensityModel::uniform(), 3);
  const double pi2 = kPi * kPi;
  const auto d0 = secular_determinant(u3, 0.0).value();
  REQUIRE(d0.has_value());
  CHECK(d0->real() == doctest::Approx(pi2 * 4 * pi2 * 9 * pi2).epsilon(1e-14));
  const auto root = secular_determinant(u3, pi2).value();
  CHECK(std::abs(*root) <= 1e-9 * (3 * pi2) * (8 * pi2));

  const auto lin = assemble(DensityModel::linear_pt(1.0), 8);
  for (double e : {3.0, 25.0, 400.0}) {
    const auto f = *secular_determinant(lin, e).value();
    CHECK(std::abs(f.imag()) <= 1e-10 * std::abs(f));
  }

  // overflow-safe log form
  const auto big = assemble(DensityModel::uniform(), 200);
  const auto lf = secular_determinant(big, 0.0);
  CHECK_FALSE(lf.value().has_value());
  double expected = 0.0;
  for (int n = 1; n <= 200; ++n) expected += std::log(n * n * pi2);
  CHECK(lf.log_abs == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("secular derivative") {
  const auto u1 = assemble(DensityModel::uniform(), 2);
  // F(E) = (π² − E)(4π² − E)
  CHECK(secular_derivative(u1, 0.0).value()->real() == doctest::Approx(-5 * kPi * kPi));

  const auto p = assemble(DensityModel::linear_pt(2.0), 6);
  const double h = 1e-4;
  const cplx fd = (*secular_determinant(p, 10.0 + h).value() - *secular_determinant(p, 10.0 - h).value()) / (2 * h);
  const cplx an = *secular_derivative(p, 10.0).value();
  CHECK(std::abs(an - fd) <= 1e-6 * std::abs(an));

  CHECK_THROWS_AS(secular_derivative(assemble(DensityModel::uniform(), 3), kPi * kPi), Error);
}
