#include <algorithm>
#include <cmath>
#include <numbers>

#include "isospec/a_transform.hpp"
#include "isospec/forward.hpp"
#include "test_util.hpp"

using namespace isospec;

namespace {

const double pi = std::numbers::pi;

const SpectralMeasure& airy_measure() {
  static const SpectralMeasure m =
      spectral_measure(builtin_potential("linear", 40.0, 8000), 10);
  return m;
}

}  // namespace

TEST_SUITE("a-transform") {
  TEST_CASE("kernel examples") {
    CHECK(a_kernel(1.0, pi / 4.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a_kernel(0.0, 3.0) == 6.0);
    CHECK(a_kernel(-1.0, 1.0) == doctest::Approx(std::sinh(2.0)).epsilon(1e-15));
    CHECK(a_kernel(-1.0, 1.0) == doctest::Approx(3.626860).epsilon(1e-6));
    CHECK(a_kernel(7.0, 0.0) == 0.0);
  }

  TEST_CASE("kernel is continuous through lambda = 0") {
    for (double alpha : {1e-3, 0.1, 1.0, 5.0, 30.0})
      CHECK(std::abs(a_kernel(1e-12, alpha) - a_kernel(-1e-12, alpha)) <
            1e-10 * alpha * alpha * alpha);
    // Across the series switch |lambda| alpha^2 = 1e-6 both branches agree.
    for (double alpha : {0.5, 2.0, 10.0}) {
      const double edge = 1e-6 / (alpha * alpha);
      for (double sign : {1.0, -1.0}) {
        const double below = a_kernel(sign * edge * (1.0 - 1e-9), alpha);
        const double above = a_kernel(sign * edge * (1.0 + 1e-9), alpha);
        CHECK(std::abs(below - above) <= 1e-13 * std::abs(below));
      }
    }
  }

  TEST_CASE("kernel matches long double closed forms") {
    for (double lambda : {-50.0, -3.0, -1e-3, 1e-3, 0.7, 12.0, 400.0})
      for (double alpha : {0.01, 0.3, 1.0, 2.5}) {
        const long double r = std::sqrt(std::abs(static_cast<long double>(lambda)));
        const long double ref = lambda > 0 ? std::sin(2.0L * alpha * r) / r
                                           : std::sinh(2.0L * alpha * r) / r;
        CHECK(std::abs(a_kernel(lambda, alpha) - static_cast<double>(ref)) <=
              1e-13 * std::max(1.0, std::abs(static_cast<double>(ref))));
      }
  }

  TEST_CASE("alpha grid") {
    const AlphaGrid g{0.0, 1.0, 101};
    CHECK(g.at(0) == 0.0);
    CHECK(g.at(100) == 1.0);
    CHECK(g.at(50) == doctest::Approx(0.5));
    CHECK_ERROR(delta_a(airy_measure(), airy_measure(), {0.0, 1.0, 0}),
                ErrorCode::invalid_argument);
    CHECK_ERROR(delta_a(airy_measure(), airy_measure(), {1.0, 0.0, 5}),
                ErrorCode::invalid_argument);
  }

  TEST_CASE("delta_a examples") {
    const AFunction zero = delta_a(airy_measure(), airy_measure(), {0.0, 1.0, 11});
    CHECK(zero.kind == AKind::difference);
    for (double v : zero.values) CHECK(v == 0.0);
    for (double r : zero.residuals) CHECK(r == 0.0);

    const AFunction four = delta_a(SpectralMeasure({4.0}, {1.5}),
                                   SpectralMeasure({4.0}, {1.0}), {0.0, pi / 4.0, 3});
    CHECK(four.values[1] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(four.values[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    const AFunction one = delta_a(SpectralMeasure({1.0}, {2.0}),
                                  SpectralMeasure({1.0}, {1.0}), {0.0, pi / 2.0, 3});
    CHECK(one.values[1] == doctest::Approx(-2.0).epsilon(1e-15));

    CHECK_ERROR(delta_a(SpectralMeasure({1.0}, {1.0}), SpectralMeasure({1.1}, {1.0}),
                        {0.0, 1.0, 3}),
                ErrorCode::spectrum_mismatch);
  }

  TEST_CASE("delta_a is odd in alpha") {
    const SpectralMeasure m1 = perturb_weights(airy_measure(), {{0, 0.3}, {3, -0.1}});
    for (double alpha : {0.05, 0.3, 1.0, 1.7, 2.0}) {
      const double pos = delta_a(m1, airy_measure(), {alpha, alpha, 1}).values[0];
      const double neg = delta_a(m1, airy_measure(), {-alpha, -alpha, 1}).values[0];
      CHECK(neg == -pos);
    }
  }

  TEST_CASE("linearity along a path to 1 ulp of the term scale") {
    const SpectralMeasure& base = airy_measure();
    const SpectralMeasure target = perturb_weights(base, {{1, 0.25}, {4, -0.05}});
    const IsospectralPath path = make_path(base, target, 0.0);
    const AlphaGrid grid{0.0, 3.0, 301};
    const AFunction full = delta_a(target, base, grid);
    const auto& e = base.eigenvalues();
    for (double t : {0.1, 0.5, 0.8}) {
      const AFunction at = delta_a(measure_at(path, t), base, grid);
      for (int i = 0; i < grid.count; ++i) {
        double scale = 0.0;
        for (int j : path.support())
          scale += 2.0 * std::max(base.weights()[j], target.weights()[j]) *
                   std::abs(a_kernel(e[j], grid.at(i)));
        CHECK(std::abs(at.values[i] - t * full.values[i]) <=
              std::ldexp(scale, -52));
      }
    }
  }

  TEST_CASE("interpolate_a examples") {
    AFunction a0, a1;
    a0.grid = a1.grid = {0.0, 1.0, 5};
    a0.values.assign(5, 2.0);
    a1.values.assign(5, 4.0);
    a0.residuals.assign(5, 0.0);
    a1.residuals.assign(5, 0.0);
    const AFunction q = interpolate_a(a0, a1, 0.25);
    for (double v : q.values) CHECK(v == 2.5);
    CHECK(interpolate_a(a0, a1, 0.0).values == a0.values);
    CHECK(interpolate_a(a0, a1, 1.0).values == a1.values);

    AFunction other = a1;
    other.grid.last = 2.0;
    CHECK_ERROR(interpolate_a(a0, other, 0.5), ErrorCode::grid_mismatch);
    other = a1;
    other.kind = AKind::regularized;
    CHECK_ERROR(interpolate_a(a0, other, 0.5), ErrorCode::grid_mismatch);
  }

  TEST_CASE("interpolated difference equals the difference at the interpolated measure") {
    const SpectralMeasure& base = airy_measure();
    const SpectralMeasure target = perturb_weights(base, {{0, 0.5}});
    const IsospectralPath path = make_path(base, target, 0.0);
    const AlphaGrid grid{0.0, 2.0, 201};
    const AFunction a0 = delta_a(base, base, grid);
    const AFunction a1 = delta_a(target, base, grid);
    const AFunction mid = interpolate_a(a0, a1, 0.3);
    const AFunction direct = delta_a(measure_at(path, 0.3), base, grid);
    const double w = std::max(base.weights()[0], target.weights()[0]);
    for (int i = 0; i < grid.count; ++i)
      CHECK(std::abs(mid.values[i] - direct.values[i]) <=
            std::ldexp(2.0 * w * std::abs(a_kernel(base.eigenvalues()[0], grid.at(i))),
                       -51));
  }

  TEST_CASE("Abel schedule") {
    const auto s = default_abel_schedule();
    REQUIRE(s.size() == 12);
    CHECK(s[0] == 1e-2);
    CHECK(s[1] == 5e-3);
    CHECK(s[2] == 2.5e-3);
    CHECK(s[11] == std::ldexp(1e-2, -11));
  }

  TEST_CASE("free Abel term against its closed form") {
    // (2/pi) int_0^inf k sin(b k) e^{-eps k^2} dk = b e^{-b^2/(4 eps)} / (2 sqrt(pi) eps^{3/2})
    for (double eps : {1e-2, 5e-3, 1e-3})
      for (double alpha : {0.01, 0.1, 0.4}) {
        const long double b = 2.0L * alpha;
        const long double ref = b * std::exp(-b * b / (4.0L * eps)) /
                                (2.0L * std::sqrt(std::numbers::pi_v<long double>) *
                                 std::pow(static_cast<long double>(eps), 1.5L));
        const FreeTerm f = free_abel_term(alpha, eps, 1e-12);
        CAPTURE(eps);
        CAPTURE(alpha);
        CHECK(std::abs(f.value - static_cast<double>(ref)) <= 1e-11);
        CHECK(f.error <= 1e-9);
      }
    CHECK_ERROR(free_abel_term(0.5, 0.0, 1e-12), ErrorCode::invalid_argument);
  }

  TEST_CASE("regularised A of the empty measure vanishes within its residual") {
    const AFunction a = a_regularized(SpectralMeasure(), {0.1, 1.0, 10});
    CHECK(a.kind == AKind::regularized);
    for (int i = 0; i < 10; ++i) {
      CHECK(std::abs(a.values[i]) <= a.residuals[i]);
      CHECK(a.residuals[i] < 1e-6);
    }
  }

  TEST_CASE("regularised A where the kernel vanishes is the free term alone") {
    const double e1 = 2.0;
    const double alpha = pi / (2.0 * std::sqrt(e1));
    const AlphaGrid grid{alpha, alpha, 1};
    const AFunction single = a_regularized(SpectralMeasure({e1}, {0.7}), grid);
    const AFunction empty = a_regularized(SpectralMeasure(), grid);
    CHECK(std::abs(single.values[0] - empty.values[0]) <=
          single.residuals[0] + empty.residuals[0] + 1e-14);
  }

  TEST_CASE("regularised difference consistency for V = x") {
    const SpectralMeasure& ma = airy_measure();
    const SpectralMeasure mb = perturb_weights(ma, {{0, 0.2}, {2, -0.1}});
    const AlphaGrid grid{0.1, 1.0, 10};
    const AFunction ra = a_regularized(ma, grid);
    const AFunction rb = a_regularized(mb, grid);
    const AFunction d = delta_a(ma, mb, grid);
    for (int i = 0; i < grid.count; ++i) {
      CHECK(ra.residuals[i] < 1e-3);
      CHECK(std::abs((ra.values[i] - rb.values[i]) - d.values[i]) <=
            ra.residuals[i] + rb.residuals[i]);
    }
  }

  TEST_CASE("regularised A errors") {
    const SpectralMeasure m({1.0}, {1.0});
    CHECK_ERROR(a_regularized(m, {0.0, 1.0, 5}), ErrorCode::invalid_argument);
    RegularizationOptions short_schedule;
    short_schedule.schedule = {1e-2, 5e-3, 2.5e-3};
    CHECK_ERROR(a_regularized(m, {0.5, 1.0, 2}, short_schedule),
                ErrorCode::invalid_argument);
    RegularizationOptions rising;
    rising.schedule = {1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2, 3.2e-2};
    CHECK_ERROR(a_regularized(m, {0.5, 1.0, 2}, rising), ErrorCode::invalid_argument);
    // A single eigenvalue at 1e4 makes e^{-eps E} far from polynomial over
    // a coarse schedule, and successive extrapolants move apart.
    RegularizationOptions coarse;
    coarse.schedule = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    CHECK_ERROR(a_regularized(SpectralMeasure({1e4}, {1.0}), {0.5, 1.0, 3}, coarse),
                ErrorCode::extrapolation_diverged);
  }
}
