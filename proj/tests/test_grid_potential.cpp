#include <cmath>
#include <numbers>

#include "isospec/grid_potential.hpp"
#include "isospec/quadrature.hpp"
#include "test_util.hpp"

using namespace isospec;

TEST_SUITE("grid-potential") {
  TEST_CASE("construction validates its inputs") {
    CHECK_ERROR(GridPotential(0.0, 4, std::vector<double>(5, 0.0)),
                ErrorCode::invalid_argument);
    CHECK_ERROR(GridPotential(1.0, 1, std::vector<double>(2, 0.0)),
                ErrorCode::invalid_argument);
    CHECK_ERROR(GridPotential(1.0, 4, std::vector<double>(4, 0.0)),
                ErrorCode::invalid_argument);
    CHECK_ERROR(GridPotential(1.0, 2, {0.0, NAN, 0.0}),
                ErrorCode::invalid_argument);
    CHECK_ERROR(GridPotential(INFINITY, 2, {0.0, 0.0, 0.0}),
                ErrorCode::invalid_argument);
  }

  TEST_CASE("uniform nodes end exactly at L") {
    const GridPotential p = builtin_potential("zero", std::numbers::pi, 7);
    CHECK(p.node(0) == 0.0);
    CHECK(p.node(7) == std::numbers::pi);
    CHECK(p.spacing() == std::numbers::pi / 7);
    CHECK(p.samples().size() == 8);
  }

  TEST_CASE("cubic interpolation reproduces cubics on every interval") {
    auto f = [](double x) { return x * x * x - 2.0 * x * x + 0.5 * x - 3.0; };
    const int n = 9;
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = f(i * 0.25);
    const GridPotential p(2.25, n, v);
    for (double x = 0.0; x <= 2.25; x += 0.0137)
      CHECK(p(x) == doctest::Approx(f(x)).epsilon(1e-13));
    CHECK(p(2.25) == doctest::Approx(f(2.25)).epsilon(1e-13));
  }

  TEST_CASE("interpolation passes through the samples") {
    std::vector<double> v = {1.0, -2.0, 0.5, 4.0, 3.0, -1.0};
    const GridPotential p(5.0, 5, v);
    for (int i = 0; i <= 5; ++i) CHECK(p(p.node(i)) == doctest::Approx(v[i]));
  }

  TEST_CASE("builtins") {
    const GridPotential lin = builtin_potential("linear", 40.0, 8000);
    CHECK(lin.label() == "linear");
    CHECK(lin.samples()[8000] == 40.0);
    CHECK(lin(12.3456) == doctest::Approx(12.3456).epsilon(1e-14));
    const GridPotential q = builtin_potential("quadratic", 10.0, 100);
    CHECK(q(3.05) == doctest::Approx(3.05 * 3.05).epsilon(1e-13));
    CHECK(is_builtin_name("zero"));
    CHECK_FALSE(is_builtin_name("cubic"));
    CHECK_ERROR(builtin_potential("cubic", 1.0, 10), ErrorCode::invalid_argument);
  }

  TEST_CASE("piece range covers the stencil") {
    const GridPotential p(4.0, 4, {0.0, 3.0, -1.0, 2.0, 5.0});
    const auto [lo, hi] = p.piece_range(0);
    CHECK(lo == -1.0);
    CHECK(hi == 3.0);
  }
}

TEST_SUITE("quadrature") {
  TEST_CASE("Simpson is exact for cubics, even and odd interval counts") {
    for (int n : {2, 3, 4, 7, 10}) {
      const double h = 1.0 / n;
      std::vector<double> f(n + 1);
      for (int i = 0; i <= n; ++i) {
        const double x = i * h;
        f[i] = 4.0 * x * x * x - x + 1.0;
      }
      CHECK(simpson(f, h) == doctest::Approx(1.5).epsilon(1e-14));
    }
  }

  TEST_CASE("cumulative Simpson matches int_0^x sin^2") {
    const int n = 4000;
    const double h = std::numbers::pi / n;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = std::sin(i * h) * std::sin(i * h);
    const auto cum = cumulative_simpson(f, h);
    CHECK(cum[0] == 0.0);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = i * h;
      worst = std::max(worst, std::abs(cum[i] - (x / 2 - std::sin(2 * x) / 4)));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("Gauss-Kronrod integrates smooth and oscillatory functions") {
    const QuadResult a = gauss_kronrod([](double x) { return std::sin(x); }, 0.0,
                                       std::numbers::pi, 1e-13);
    CHECK(a.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.error >= 0.0);
    const QuadResult b = gauss_kronrod(
        [](double x) { return std::cos(40.0 * x) * std::exp(-x); }, 0.0, 5.0, 1e-12);
    const double exact = (1.0 - std::exp(-5.0) * (std::cos(200.0) - 40.0 * std::sin(200.0))) / 1601.0;
    CHECK(std::abs(b.value - exact) < 1e-12);
    CHECK(std::abs(b.value - exact) <= b.error + 1e-15);
    CHECK(gauss_kronrod([](double) { return 1.0; }, 2.0, 2.0, 1e-10).value == 0.0);
    CHECK_ERROR(gauss_kronrod([](double x) { return x; }, 0.0, 1.0, 0.0),
                ErrorCode::invalid_argument);
  }
}
