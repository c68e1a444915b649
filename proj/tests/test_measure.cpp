#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "isospec/measure.hpp"
#include "test_util.hpp"

using namespace isospec;

namespace {

const double pi = std::numbers::pi;

SpectralMeasure free_two() { return SpectralMeasure({1.0, 4.0}, {2.0 / pi, 8.0 / pi}); }

// Random measures on one eigenvalue list with weights spread over decades.
std::pair<SpectralMeasure, SpectralMeasure> random_pair(std::mt19937_64& rng, int J) {
  std::uniform_real_distribution<double> log_w(-3.0, 3.0), gap(0.1, 5.0);
  std::vector<double> e(J), w0(J), w1(J);
  double level = -2.0;
  for (int j = 0; j < J; ++j) {
    level += gap(rng);
    e[j] = level;
    w0[j] = std::pow(10.0, log_w(rng));
    w1[j] = std::pow(10.0, log_w(rng));
  }
  return {SpectralMeasure(e, w0), SpectralMeasure(e, w1)};
}

}  // namespace

TEST_SUITE("measure-path") {
  TEST_CASE("measure validation") {
    CHECK_ERROR(SpectralMeasure({1.0, 4.0}, {1.0}), ErrorCode::length_mismatch);
    CHECK_ERROR(SpectralMeasure({1.0}, {0.0}), ErrorCode::nonpositive_weight);
    CHECK_ERROR(SpectralMeasure({1.0}, {-1.0}), ErrorCode::nonpositive_weight);
    CHECK_ERROR(SpectralMeasure({4.0, 1.0}, {1.0, 1.0}), ErrorCode::invalid_argument);
    CHECK_ERROR(SpectralMeasure({1.0, 1.0}, {1.0, 1.0}), ErrorCode::invalid_argument);
    CHECK_ERROR(SpectralMeasure({NAN}, {1.0}), ErrorCode::invalid_argument);
  }

  TEST_CASE("make_path examples") {
    const SpectralMeasure m0 = free_two();
    const IsospectralPath same = make_path(m0, m0, 0.0);
    CHECK(same.support().empty());
    CHECK(measure_at(same, 0.37).weights() == m0.weights());

    const SpectralMeasure m1({1.0, 4.0}, {1.0, 8.0 / pi});
    const IsospectralPath p = make_path(m0, m1, 1e-8);
    CHECK(p.support() == std::vector<int>{0});
    CHECK(p.tolerance() == 1e-8);

    const SpectralMeasure off({1.0, 4.1}, {1.0, 1.0});
    try {
      make_path(m0, off, 1e-8);
      FAIL("expected spectrum_mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::spectrum_mismatch);
      CHECK(std::string(e.what()).find("j = 2") != std::string::npos);
    }
    CHECK_ERROR(make_path(m0, SpectralMeasure({1.0}, {1.0}), 1e-8),
                ErrorCode::length_mismatch);
    CHECK_ERROR(make_path(SpectralMeasure(), SpectralMeasure(), 1e-8),
                ErrorCode::invalid_argument);
    CHECK_ERROR(make_path(m0, m0, -1.0), ErrorCode::invalid_argument);
  }

  TEST_CASE("make_path canonicalises the eigenvalues to the base") {
    const SpectralMeasure m0({1.0, 4.0}, {1.0, 1.0});
    const SpectralMeasure m1({1.0 + 1e-12, 4.0 - 1e-12}, {2.0, 1.0});
    const IsospectralPath p = make_path(m0, m1, 1e-10);
    CHECK(p.target().eigenvalues() == m0.eigenvalues());
    CHECK(p.target().weights() == m1.weights());
  }

  TEST_CASE("measure_at examples") {
    const SpectralMeasure m0({1.0}, {2.0 / pi});
    const SpectralMeasure m1({1.0}, {1.0});
    const IsospectralPath p = make_path(m0, m1, 0.0);
    CHECK(measure_at(p, 0.0) == p.base());
    CHECK(measure_at(p, 1.0) == p.target());
    CHECK(measure_at(p, 0.5).weights()[0] == doctest::Approx(0.818310).epsilon(1e-6));
    CHECK(measure_at(p, 0.5).weights()[0] == doctest::Approx((2.0 / pi + 1.0) / 2.0));
    CHECK(measure_at(p, 0.5).provenance().support == std::vector<int>{0});
    CHECK_ERROR(measure_at(p, NAN), ErrorCode::invalid_argument);
  }

  TEST_CASE("extrapolation outside [0, 1] while weights stay positive") {
    const SpectralMeasure m0({1.0, 4.0}, {1.0, 1.0});
    const SpectralMeasure m1({1.0, 4.0}, {2.0, 1.0});
    const IsospectralPath p = make_path(m0, m1, 0.0);
    CHECK(measure_at(p, 1.5).weights()[0] == doctest::Approx(2.5));
    CHECK(measure_at(p, -0.5).weights()[0] == doctest::Approx(0.5));
    CHECK_ERROR(measure_at(p, -1.0), ErrorCode::nonpositive_weight);
    CHECK_ERROR(measure_at(p, -3.0), ErrorCode::nonpositive_weight);
  }

  TEST_CASE("perturb_weights examples") {
    const SpectralMeasure m({1.0}, {2.0 / pi});
    CHECK(perturb_weights(m, {}) == m);
    const SpectralMeasure up = perturb_weights(m, {{0, 1.0}});
    CHECK(up.weights()[0] == 2.0 / pi + 1.0);
    CHECK(up.eigenvalues() == m.eigenvalues());
    CHECK(up.provenance().support == std::vector<int>{0});
    CHECK_ERROR(perturb_weights(m, {{0, -2.0 / pi}}), ErrorCode::nonpositive_weight);
    CHECK_ERROR(perturb_weights(m, {{1, 0.1}}), ErrorCode::invalid_argument);
    CHECK_ERROR(perturb_weights(m, {{0, INFINITY}}), ErrorCode::invalid_argument);
  }

  TEST_CASE("affine consistency to 1 ulp against a long double reference") {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    std::int64_t worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto [m0, m1] = random_pair(rng, 12);
      const IsospectralPath p = make_path(m0, m1, 0.0);
      const double t = tdist(rng);
      const SpectralMeasure mt = measure_at(p, t);
      for (int j = 0; j < 12; ++j) {
        const long double exact =
            (1.0L - t) * m0.weights()[j] + static_cast<long double>(t) * m1.weights()[j];
        worst = std::max(worst, ulp_distance(mt.weights()[j], static_cast<double>(exact)));
      }
    }
    CHECK(worst <= 1);
  }

  TEST_CASE("eigenvalues never move along the path") {
    std::mt19937_64 rng(7);
    const auto [m0, m1] = random_pair(rng, 20);
    const IsospectralPath p = make_path(m0, m1, 0.0);
    for (double t : {0.0, 0.1, 0.5, 0.9, 1.0, 1e-300, 1.0 - 1e-16})
      CHECK(measure_at(p, t).eigenvalues() == p.base().eigenvalues());
  }

  // Parameters are drawn so that 1 - t is exact; otherwise the rounding of the
  // reversed parameter itself is amplified by the weight contrast.
  TEST_CASE("path composition: reversed path at 1 - t agrees to 1 ulp") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> tdist(0.5, 1.0);
    std::int64_t worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto [m0, m1] = random_pair(rng, 10);
      const IsospectralPath fwd = make_path(m0, m1, 0.0);
      const IsospectralPath rev = make_path(m1, m0, 0.0);
      const double u = tdist(rng);
      const double t = trial % 2 ? u : 1.0 - u;
      REQUIRE(1.0 - (1.0 - t) == t);
      const auto a = measure_at(fwd, t).weights();
      const auto b = measure_at(rev, 1.0 - t).weights();
      for (std::size_t j = 0; j < a.size(); ++j)
        worst = std::max(worst, ulp_distance(a[j], b[j]));
    }
    CHECK(worst <= 1);
  }

  TEST_CASE("weights stay above the endpoint minimum on [0, 1]") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const auto [m0, m1] = random_pair(rng, 8);
      const IsospectralPath p = make_path(m0, m1, 0.0);
      double floor = INFINITY;
      for (int j = 0; j < 8; ++j)
        floor = std::min({floor, m0.weights()[j], m1.weights()[j]});
      for (int k = 0; k <= 20; ++k) {
        const auto w = measure_at(p, k / 20.0).weights();
        CHECK(*std::min_element(w.begin(), w.end()) >= floor);
      }
    }
  }
}
