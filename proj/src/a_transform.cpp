#include "isospec/a_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isospec/error.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

const char* kind_name(AKind kind) {
  return kind == AKind::difference ? "difference" : "regularized";
}

double a_kernel(double lambda, double alpha) {
  const double s = 2.0 * alpha;
  if (std::abs(lambda) * alpha * alpha < 1e-6) {
    const double q = s * s * lambda;
    return s * (1.0 - q / 6.0 + q * q / 120.0);
  }
  if (lambda > 0.0) {
    const double r = std::sqrt(lambda);
    return std::sin(s * r) / r;
  }
  const double r = std::sqrt(-lambda);
  return std::sinh(s * r) / r;
}

namespace {

void check_grid(const AlphaGrid& grid) {
  if (grid.count < 1)
    fail(ErrorCode::invalid_argument, "alpha grid needs at least one point");
  if (!std::isfinite(grid.first) || !std::isfinite(grid.last) ||
      (grid.count > 1 && !(grid.last > grid.first)))
    fail(ErrorCode::invalid_argument, "alpha grid must be increasing");
}

// Lagrange weights extrapolating samples at x_i to x = 0.
std::vector<double> extrapolation_weights(const double* x, int n) {
  std::vector<double> w(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (k != i) w[i] *= x[k] / (x[k] - x[i]);
  return w;
}

}  // namespace

AFunction delta_a(const SpectralMeasure& a, const SpectralMeasure& b,
                  const AlphaGrid& grid) {
  check_grid(grid);
  if (a.eigenvalues() != b.eigenvalues())
    fail(ErrorCode::spectrum_mismatch,
         "delta_a needs measures on the same eigenvalue list");
  const auto& e = a.eigenvalues();
  std::vector<double> diff(e.size());
  for (std::size_t j = 0; j < e.size(); ++j)
    diff[j] = a.weights()[j] - b.weights()[j];

  AFunction out;
  out.grid = grid;
  out.kind = AKind::difference;
  out.values.resize(grid.count);
  out.residuals.assign(grid.count, 0.0);
  for (int i = 0; i < grid.count; ++i) {
    const double alpha = grid.at(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (diff[j] != 0.0) sum += diff[j] * a_kernel(e[j], alpha);
    out.values[i] = -2.0 * sum;
  }
  return out;
}

std::vector<double> default_abel_schedule(int levels) {
  std::vector<double> s(levels);
  for (int k = 0; k < levels; ++k) s[k] = std::ldexp(1e-2, -k);
  return s;
}

FreeTerm free_abel_term(double alpha, double eps, double abs_tol) {
  if (!(eps > 0.0))
    fail(ErrorCode::invalid_argument, "Abel parameter must be positive");
  // (2/pi) int_0^K k sin(2 alpha k) e^{-eps k^2} dk; beyond K the Gaussian
  // envelope is below ~e^{-40}.
  const double kmax = std::sqrt(40.0 / eps);
  const double b = 2.0 * alpha;
  auto f = [&](double k) { return k * std::sin(b * k) * std::exp(-eps * k * k); };
  const double panel =
      b > 0.0 ? std::min(std::numbers::pi / b, kmax) : kmax;
  const int panels = static_cast<int>(std::ceil(kmax / panel));
  // sin(b k) carries a relative rounding error of about ulp(b k), so no panel
  // is asked for more than that times its envelope mass.
  const double envelope_peak = 1.0 / std::sqrt(2.0 * std::numbers::e * eps);
  FreeTerm out;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * panel;
    const double hi = std::min(kmax, lo + panel);
    const double kc = std::clamp(1.0 / std::sqrt(2.0 * eps), lo, hi);
    const double peak = std::min(envelope_peak, kc * std::exp(-eps * kc * kc));
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, b * hi) * peak * (hi - lo);
    const double tol = std::max(abs_tol / panels, noise);
    const QuadResult r = gauss_kronrod(f, lo, hi, tol, 20);
    out.value += r.value;
    out.error += r.error;
  }
  out.value *= 2.0 / std::numbers::pi;
  out.error *= 2.0 / std::numbers::pi;
  return out;
}

AFunction a_regularized(const SpectralMeasure& m, const AlphaGrid& grid,
                        const RegularizationOptions& opts) {
  check_grid(grid);
  if (!(grid.first > 0.0))
    fail(ErrorCode::invalid_argument,
         "regularised A is evaluated only for alpha > 0");
  const std::vector<double> schedule =
      opts.schedule.empty() ? default_abel_schedule() : opts.schedule;
  const int levels = static_cast<int>(schedule.size());
  const int depth = opts.depth;
  if (depth < 2 || levels < depth + 1)
    fail(ErrorCode::invalid_argument,
         "Abel schedule needs more levels than the extrapolation depth");
  for (int k = 0; k < levels; ++k)
    if (!(schedule[k] > 0.0) || (k > 0 && !(schedule[k] < schedule[k - 1])))
      fail(ErrorCode::invalid_argument,
           "Abel schedule must be positive and decreasing");

  const auto& e = m.eigenvalues();
  const auto& a = m.weights();
  AFunction out;
  out.grid = grid;
  out.kind = AKind::regularized;
  out.values.resize(grid.count);
  out.residuals.resize(grid.count);

  std::vector<double> value(levels), qerr(levels);
  for (int i = 0; i < grid.count; ++i) {
    const double alpha = grid.at(i);
    double scale = 0.0;
    for (int k = 0; k < levels; ++k) {
      const double eps = schedule[k];
      double discrete = 0.0;
      for (std::size_t j = 0; j < e.size(); ++j)
        discrete += a[j] * a_kernel(e[j], alpha) * std::exp(-eps * e[j]);
      const FreeTerm free = free_abel_term(alpha, eps, opts.quad_tol);
      value[k] = -2.0 * (discrete - free.value);
      qerr[k] = 2.0 * free.error;
      scale = std::max(scale, std::abs(value[k]));
    }
    // Extrapolants from each trailing window of `depth` levels.
    std::vector<double> extrap, noise;
    for (int end = depth; end <= levels; ++end) {
      const int start = end - depth;
      const auto w = extrapolation_weights(schedule.data() + start, depth);
      double v = 0.0, n = 0.0;
      for (int k = 0; k < depth; ++k) {
        v += w[k] * value[start + k];
        n += std::abs(w[k]) * qerr[start + k];
      }
      extrap.push_back(v);
      noise.push_back(n);
    }
    const std::size_t last = extrap.size() - 1;
    const double r_last = std::abs(extrap[last] - extrap[last - 1]);
    const double floor =
        noise[last] + noise[last - 1] +
        64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (extrap.size() >= 3) {
      const double r_prev = std::abs(extrap[last - 1] - extrap[last - 2]);
      if (r_last > r_prev && r_last > floor)
        fail(ErrorCode::extrapolation_diverged,
             "Abel extrapolation not converging at alpha = " +
                 std::to_string(alpha));
    }
    out.values[i] = extrap[last];
    out.residuals[i] = r_last + floor;
  }
  return out;
}

AFunction interpolate_a(const AFunction& a0, const AFunction& a1, double t) {
  if (!(a0.grid == a1.grid) || a0.kind != a1.kind ||
      a0.values.size() != a1.values.size())
    fail(ErrorCode::grid_mismatch, "A-functions live on different grids");
  AFunction out = a0;
  for (std::size_t i = 0; i < a0.values.size(); ++i) {
    out.values[i] = std::fma(t, a1.values[i], (1.0 - t) * a0.values[i]);
    out.residuals[i] =
        std::abs(1.0 - t) * a0.residuals[i] + std::abs(t) * a1.residuals[i];
  }
  return out;
}

}  // namespace isospec
