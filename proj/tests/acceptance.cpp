// Acceptance suite: one PASS/FAIL line per criterion.

#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "isospec/a_transform.hpp"
#include "isospec/forward.hpp"
#include "isospec/measure.hpp"
#include "isospec/reconstruct.hpp"
#include "isospec/verify.hpp"
#include "oracles.hpp"

using namespace isospec;

namespace {

int failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void run(int id, const char* title, double time_limit,
         const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = o.pass;
  std::string timing = fmt("%.2fs", secs);
  if (time_limit > 0.0) {
    timing += fmt(" (limit %.0fs)", time_limit);
    if (secs >= time_limit) pass = false;
  }
  if (!pass) ++failures;
  std::printf("%s  [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double sup_diff(std::span<const double> a, std::span<const double> b,
                int count) {
  double m = 0.0;
  for (int i = 0; i < count; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

IsospectralPath rank_two_airy(double length, int n, int J) {
  const GridPotential pot = builtin_potential("linear", length, n);
  const SpectralMeasure m = spectral_measure(pot, J);
  const auto& a = m.weights();
  return make_path(m, perturb_weights(m, {{0, 0.5 * a[0]}, {1, -0.3 * a[1]}}),
                   1e-10);
}

IsospectralPath rank_one_airy() {
  const GridPotential pot = builtin_potential("linear", 40.0, 8000);
  const SpectralMeasure m = spectral_measure(pot, 10);
  return make_path(m, perturb_weights(m, {{0, 0.5 * m.weights()[0]}}), 1e-10);
}

}  // namespace

int main() {
  run(1, "forward exactness, V = 0 on [0, pi], n = 4000", 5.0, [] {
    const GridPotential pot = builtin_potential("zero", std::numbers::pi, 4000);
    const SpectralMeasure m = spectral_measure(pot, 4);
    double e_err = 0.0, a_err = 0.0;
    for (int j = 1; j <= 4; ++j) {
      e_err = std::max(e_err, rel(m.eigenvalues()[j - 1], j * j));
      a_err = std::max(a_err, rel(m.weights()[j - 1], 2.0 * j * j / std::numbers::pi));
    }
    return Outcome{e_err < 1e-8 && a_err < 1e-8,
                   fmt("max rel eigenvalue error %.2e, max rel weight error %.2e (tol 1e-8)",
                       e_err, a_err)};
  });

  run(2, "m-function anchor m(i) = (-1+i)/sqrt 2 for V = 0", 1.0, [] {
    const GridPotential pot = builtin_potential("zero", std::numbers::pi, 4000);
    const std::complex<double> m = weyl_m_ode(pot, {0.0, 1.0});
    const std::complex<double> exact(-std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2);
    const double err = std::abs(m - exact);
    return Outcome{err < 1e-6, fmt("|m - exact| = %.2e (tol 1e-6)", err)};
  });

  std::optional<IsospectralPath> airy_path;
  run(3, "A-linearity on a 1000-point alpha grid, rank-two Airy path", 1.0,
      [&] {
        airy_path = rank_two_airy(40.0, 8000, 10);
        const IsospectralPath& airy2 = *airy_path;
        const AlphaGrid grid{0.0, 5.0, 1000};
        const AFunction a1 = delta_a(airy2.target(), airy2.base(), grid);
        const AFunction a0 = delta_a(airy2.base(), airy2.base(), grid);
        const auto& e = airy2.base().eigenvalues();
        const auto& w0 = airy2.base().weights();
        const auto& w1 = airy2.target().weights();
        long long worst_ulps = 0;
        double worst_scaled = 0.0;
        for (double t : {0.125, 0.25, 0.5, 0.75, 0.9}) {
          const AFunction direct = delta_a(measure_at(airy2, t), airy2.base(), grid);
          const AFunction affine = interpolate_a(a0, a1, t);
          for (int i = 0; i < grid.count; ++i) {
            const double x = direct.values[i], y = affine.values[i];
            // Distance in units in the last place of the result.
            const long long d = std::llabs(
                std::bit_cast<long long>(x) - std::bit_cast<long long>(y));
            if (std::signbit(x) == std::signbit(y)) worst_ulps = std::max(worst_ulps, d);
            else worst_ulps = std::max(worst_ulps, 1LL << 62);
            // The same distance measured against the magnitude of the summed
            // terms, 2 sum_j max(a_j0, a_j1) |kernel_j|.
            double scale = 0.0;
            for (std::size_t j = 0; j < e.size(); ++j)
              scale += 2.0 * std::max(w0[j], w1[j]) *
                       std::abs(a_kernel(e[j], grid.at(i)));
            const double ulp = std::nextafter(scale, INFINITY) - scale;
            worst_scaled = std::max(worst_scaled, std::abs(x - y) / ulp);
          }
        }
        return Outcome{worst_scaled <= 1.0,
                       fmt("max deviation %.2f ulp of the term scale; %.0f ulp of the value",
                           worst_scaled, static_cast<double>(worst_ulps))};
      });

  run(4, "rank-one reconstruction vs closed-form oracle, V = 0, dc = 1", 10.0,
      [] {
        const GridPotential pot = builtin_potential("zero", std::numbers::pi, 4000);
        const SpectralMeasure m = spectral_measure(pot, 4);
        const IsospectralPath path = make_path(m, perturb_weights(m, {{0, 1.0}}), 1e-10);
        const ReconstructionResult r = reconstruct_at(path, pot, 1.0);
        const GridPotential o =
            rank_one_oracle(pot, eigenfunction(pot, m.eigenvalues()[0]), 1.0);
        const double d =
            sup_diff(r.potential.samples(), o.samples(), pot.intervals() + 1);
        double sym = 0.0;
        for (int i = 0; i <= pot.intervals(); ++i)
          sym = std::max(sym, std::abs(r.potential.samples()[i] -
                                       oracle::rank_one_free(pot.node(i), 1.0)));
        return Outcome{d < 1e-8 && sym < 1e-8,
                       fmt("sup |V_rec - V_oracle| = %.2e, sup |V_rec - closed form| = %.2e (tol 1e-8)",
                           d, sym)};
      });

  run(5, "isospectral path end to end, Airy L = 40, J = 10, rank two", 120.0,
      [&] {
        const GridPotential pot = builtin_potential("linear", 40.0, 8000);
        const IsospectralPath airy2 = rank_two_airy(40.0, 8000, 10);
        const std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 1.0};
        const IsospectralityReport rep = path_report(airy2, pot, ts);
        double e = 0.0, w = 0.0;
        for (const auto& r : rep.records) {
          e = std::max(e, r.eig_dev);
          w = std::max(w, r.weight_dev);
        }
        const bool ok = rep.pass && rep.compared == 6 && e < 1e-5 && w < 1e-4;
        return Outcome{ok, fmt("%.0f eigenvalues: max rel dev %.2e (tol 1e-5)",
                               static_cast<double>(rep.compared), e) +
                               fmt(", max rel weight dev %.2e (tol 1e-4)", w)};
      });

  const IsospectralPath airy2 = airy_path ? *airy_path : rank_two_airy(40.0, 8000, 10);
  run(6, "rank-two reconstruction vs Nystrom GL oracle on [0, L/2]", 120.0,
      [&] {
        const GridPotential pot = builtin_potential("linear", 40.0, 8000);
        std::vector<oracle::Mode> modes;
        double worst = 0.0;
        for (double t : {0.5, 1.0}) {
          modes.clear();
          for (int j : airy2.support()) {
            const RegularSolution phi =
                eigenfunction(pot, airy2.base().eigenvalues()[j]);
            modes.push_back({airy2.weight_at(j, t) - airy2.base().weights()[j],
                             phi.values, phi.derivatives});
          }
          const auto ny = oracle::nystrom_gl(pot, modes, 20.0, 2, 120);
          const ReconstructionResult r = reconstruct_at(airy2, pot, t);
          for (std::size_t q = 0; q < ny.x.size(); ++q)
            worst = std::max(worst,
                             std::abs(r.potential.samples()[2 * q] - ny.v[q]));
        }
        return Outcome{worst < 1e-5, fmt("sup |V_rec - V_nystrom| = %.2e (tol 1e-5)", worst)};
      });

  run(7, "continuity in t: halving the t step halves L1 increments", 0.0,
      [&] {
        const GridPotential pot = builtin_potential("linear", 40.0, 8000);
        auto max_increment = [&](int steps) {
          std::vector<double> ts;
          for (int i = 0; i <= steps; ++i) ts.push_back(static_cast<double>(i) / steps);
          const auto pr = reconstruct_path(airy2, pot, ts, {}, false);
          double m = 0.0;
          for (std::size_t i = 0; i + 1 < pr.results.size(); ++i)
            m = std::max(m, l1_distance(pr.results[i + 1].potential,
                                        pr.results[i].potential, 20.0));
          return m;
        };
        const double coarse = max_increment(4), fine = max_increment(8);
        const double ratio = fine / coarse;
        return Outcome{ratio >= 0.4 && ratio <= 0.6,
                       fmt("max increment %.4f -> %.4f", coarse, fine) +
                           fmt(", ratio %.4f (want [0.4, 0.6])", ratio)};
      });

  run(8, "Chebyshev-in-t smoothness, rank-one Airy path", 0.0, [] {
    const IsospectralPath path = rank_one_airy();
    const GridPotential pot = builtin_potential("linear", 40.0, 8000);
    const OverlapTable table = overlap_table(pot, path.base(), path.support());
    const SmoothnessDiagnostic s = smoothness_in_t(path, pot, table);
    return Outcome{s.max_inner < 1e-8,
                   fmt("max off-node deviation on x <= L/2: %.2e (tol 1e-8)", s.max_inner)};
  });

  run(9, "locality: L = 40 -> 50 leaves V_t on [0, 20] unchanged", 0.0, [&] {
    const GridPotential p40 = builtin_potential("linear", 40.0, 8000);
    const GridPotential p50 = builtin_potential("linear", 50.0, 10000);
    const IsospectralPath path50 = rank_two_airy(50.0, 10000, 10);
    double worst = 0.0;
    for (double t : {0.5, 1.0}) {
      const ReconstructionResult a = reconstruct_at(airy2, p40, t);
      const ReconstructionResult b = reconstruct_at(path50, p50, t);
      worst = std::max(worst, sup_diff(a.potential.samples(), b.potential.samples(), 4001));
    }
    return Outcome{worst < 1e-9, fmt("sup |V_40 - V_50| on [0, 20] = %.2e (tol 1e-9)", worst)};
  });

  run(10, "regularised A of the empty measure, alpha in [0.05, 1]", 0.0, [] {
    const AFunction a = a_regularized(SpectralMeasure(), AlphaGrid{0.05, 1.0, 96});
    double max_a = 0.0, max_r = 0.0;
    bool bounded = true;
    for (int i = 0; i < a.grid.count; ++i) {
      max_a = std::max(max_a, std::abs(a.values[i]));
      max_r = std::max(max_r, a.residuals[i]);
      if (!(std::abs(a.values[i]) <= a.residuals[i])) bounded = false;
    }
    return Outcome{bounded && max_r < 1e-3,
                   fmt("max |A| %.2e, max residual %.2e (|A| <= residual < 1e-3)",
                       max_a, max_r)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
