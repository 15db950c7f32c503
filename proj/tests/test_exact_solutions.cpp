#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ptstring/errors.hpp"
#include "ptstring/exact_solutions.hpp"
#include "ptstring/quadrature.hpp"

using namespace ptstring;

namespace {
constexpr double kPi = std::numbers::pi;

// ∫ δ̄_K(x, y) f(x) dx
template <class F>
cplx reproduce(const SolvableString& s, double y, int K, F&& f, double tol = 1e-10) {
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.initial_panels = 8;
  return integrate([&](double x) { return pt_delta(s, x, y, K) * f(x); }, -0.5, 0.5, opt);
}
}  // namespace

TEST_CASE("constructor accepts the solvable kinds only") {
  CHECK_NOTHROW(SolvableString(DensityModel::uniform()));
  CHECK_NOTHROW(SolvableString(DensityModel::borg(0.0)));
  CHECK_NOTHROW(SolvableString(DensityModel::solvable_family(2.0, cplx(0.0, 1.5), 0.01)));
  CHECK_THROWS_AS(SolvableString(DensityModel::linear_pt(1.0)), Error);
  CHECK_THROWS_AS(SolvableString(DensityModel::quadratic_pt(1.0)), Error);
}

TEST_CASE("optical length") {
  for (const auto& m : {DensityModel::borg(1.0), DensityModel::pt_borg(1.0), DensityModel::pt_borg(0.1)}) {
    const SolvableString s(m);
    CHECK(std::abs(s.sigma(-0.5)) <= 1e-15);
    CHECK(s.has_closed_form_sigma());
    CHECK(s.sigma_discrepancy() <= 1e-10);
    for (double x : {-0.37, -0.1, 0.0, 0.22, 0.5}) CHECK(std::abs(s.sigma(x) - s.sigma_quadrature(x)) <= 1e-10);
  }
  // σ_L = 1 makes the whole family isospectral to the uniform string
  CHECK(std::abs(SolvableString(DensityModel::pt_borg(1.0)).sigma_L() - 1.0) <= 1e-12);
  CHECK(std::abs(SolvableString(DensityModel::borg(2.0)).sigma_L() - 1.0) <= 1e-12);

  const SolvableString borg(DensityModel::borg(1.0));
  double prev = -1.0;
  for (int j = 0; j <= 100; ++j) {
    const double v = borg.sigma(-0.5 + j / 100.0).real();
    CHECK(v > prev);
    prev = v;
  }

  const SolvableString fam(DensityModel::solvable_family(2.0, cplx(0.0, 1.5), 0.01));
  CHECK_FALSE(fam.has_closed_form_sigma());
  CHECK(std::abs(fam.eigenvalue(2) - 0.01 - 4.0 * (fam.eigenvalue(1) - 0.01)) <= 1e-12);
}

TEST_CASE("eigenfunction values") {
  const SolvableString flat(DensityModel::borg(0.0));
  CHECK(std::abs(exact_eigenfunction(flat, 1, 0.0) - std::numbers::sqrt2) <= 1e-14);

  // explicit Borg modes at α = 1
  const double a = 1.0;
  const SolvableString borg(DensityModel::borg(a));
  for (int n = 1; n <= 5; ++n) {
    for (double x : {-0.45, -0.2, 0.0, 0.13, 0.4}) {
      const double d = 2 * a * x + a + 2;
      const double ref = 2 * std::numbers::sqrt2 * std::sqrt(a + 1) / d *
                         std::sin(kPi * (a + 1) * n * (2 * x + 1) / d);
      CHECK(std::abs(exact_eigenfunction(borg, n, x) - ref) <= 1e-12);
    }
  }

  for (const auto& m : {DensityModel::borg(1.0), DensityModel::pt_borg(1.0), DensityModel::pt_borg(2.0)}) {
    const SolvableString s(m);
    for (int n = 1; n <= 8; ++n) {
      CHECK(std::abs(exact_eigenfunction(s, n, -0.5)) <= 1e-12);
      CHECK(std::abs(exact_eigenfunction(s, n, 0.5)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(exact_eigenfunction(borg, 0, 0.0), Error);
  CHECK_THROWS_AS(exact_eigenfunction(borg, 1, 0.51), Error);
}

TEST_CASE("PT parity of the real modes") {
  // φ_n*(−x) = ±φ_n(x), the sign alternating with n
  const SolvableString s(DensityModel::pt_borg(1.0));
  for (int n = 1; n <= 6; ++n) {
    const double sign = n % 2 ? 1.0 : -1.0;
    for (double x : {0.05, 0.2, 0.41}) {
      const cplx here = exact_eigenfunction(s, n, x);
      CHECK(std::abs(std::conj(exact_eigenfunction(s, n, -x)) - sign * here) <= 1e-12 * (1 + std::abs(here)));
    }
  }
}

TEST_CASE("Helmholtz residuals") {
  CHECK(helmholtz_residual(SolvableString(DensityModel::uniform()), 2, 201) <= 1e-10);
  for (const auto& m : {DensityModel::borg(1.0), DensityModel::pt_borg(1.0)}) {
    const SolvableString s(m);
    for (int n = 1; n <= 4; ++n) CHECK(helmholtz_residual(s, n, 201) <= 1e-5);
  }
  // κ != 0: E_n = n²π²/σ_L² + κ
  const SolvableString fam(DensityModel::solvable_family(2.0, cplx(0.0, 1.5), 0.01));
  CHECK(helmholtz_residual(fam, 1, 101) <= 1e-5);
}

TEST_CASE("isospectrality") {
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    CAPTURE(a);
    CHECK(isospectrality_check(DensityModel::pt_borg(a), 64) <= 1e-7);
  }
  // the real Borg string needs a larger basis: 1.4e-8 at N = 64, 7e-10 at N = 96
  CHECK(isospectrality_check(DensityModel::borg(1.0), 96) <= 1e-8);
  CHECK(isospectrality_check(DensityModel::borg(1.0), 64) <= 1e-7);
  CHECK_THROWS_AS(isospectrality_check(DensityModel::pt_borg(1.0), 32), Error);
  CHECK_THROWS_AS(isospectrality_check(DensityModel::linear_pt(1.0), 64), Error);
}

TEST_CASE("bilinear orthogonality") {
  const auto u = bilinear_gram(SolvableString(DensityModel::uniform()), 5);
  CHECK(u.deviation <= 1e-12);

  const auto pt = bilinear_gram(SolvableString(DensityModel::pt_borg(1.0)), 8);
  CHECK(pt.deviation <= 1e-8);
  CHECK(pt.conjugate_deviation <= 1e-8);
  REQUIRE(pt.signs.size() == 8);
  for (int n = 0; n < 8; ++n) CHECK(pt.signs[n] == (n % 2 ? -1 : 1));

  CHECK(bilinear_gram(SolvableString(DensityModel::borg(2.0)), 8).deviation <= 1e-10);
  CHECK_THROWS_AS(bilinear_gram(SolvableString(DensityModel::uniform()), 21), Error);
}

TEST_CASE("delta kernel") {
  const SolvableString flat(DensityModel::borg(0.0));
  for (double x : {-0.3, 0.0, 0.17}) CHECK(std::abs(pt_delta(flat, x, 0.1, 50).imag()) <= 1e-12);

  const SolvableString s(DensityModel::pt_borg(0.1));
  for (double x : {-0.3, 0.05, 0.4}) {
    for (double y : {0.0, 0.2}) {
      const cplx d = pt_delta(s, x, y, 50);
      CHECK(std::abs(d - std::conj(pt_delta(s, -x, -y, 50))) <= 1e-10 * (1 + std::abs(d)));
    }
  }
  CHECK_THROWS_AS(pt_delta(s, 0.0, 0.0, 201), Error);
}

TEST_CASE("reproducing property") {
  // at α = 1 the high modes reach |φ_50| ~ 1e8, so only an absolute 1e-4 is asked of the quadrature
  const SolvableString s(DensityModel::pt_borg(1.0));
  for (int m = 1; m <= 5; ++m) {
    const cplx got = reproduce(s, 0.0, 50, [&](double x) { return exact_eigenfunction(s, m, x); }, 1e-4);
    CHECK(std::abs(got - exact_eigenfunction(s, m, 0.0)) <= 1e-2);
  }

  const SolvableString mild(DensityModel::pt_borg(0.1));
  for (double y : {0.0, 0.2}) {
    for (int m = 1; m <= 3; ++m) {
      auto phi = [&](double x) { return exact_eigenfunction(mild, m, x); };
      // exact once K >= m, so only a floor can be seen
      const double e10 = std::abs(reproduce(mild, y, 10, phi) - phi(y));
      const double e50 = std::abs(reproduce(mild, y, 50, phi) - phi(y));
      CHECK(e10 <= 1e-9);
      CHECK(e50 <= e10 + 1e-9);

      // conjugate form: ∫ δ̄_K(x, y) φ_m*(−x) dx = φ_m*(−y)
      auto conj_phi = [&](double x) { return std::conj(exact_eigenfunction(mild, m, -x)); };
      CHECK(std::abs(reproduce(mild, y, 50, conj_phi) - conj_phi(y)) <= 1e-9);
    }
    // truncation-limited decrease on a smooth non-mode
    auto f = [](double x) { return cplx(std::cos(kPi * x), 0.0); };
    const double e10 = std::abs(reproduce(mild, y, 10, f) - f(y));
    const double e50 = std::abs(reproduce(mild, y, 50, f) - f(y));
    CHECK(e50 < e10);
  }
}
