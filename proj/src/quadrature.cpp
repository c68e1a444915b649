#include "isospec/quadrature.hpp"

#include <cmath>
#include <limits>

#include "isospec/error.hpp"

namespace isospec {

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    } else if (i + 1 < n) {
      out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    } else {
      out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
  }
  return out;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  const std::size_t intervals = n - 1;
  double sum = 0.0;
  if (intervals % 2 == 0) {
    for (std::size_t i = 2; i < n; i += 2)
      sum += h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    return sum;
  }
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
  const std::size_t simpson_end = intervals - 3;
  for (std::size_t i = 2; i <= simpson_end; i += 2)
    sum += h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  const std::size_t k = simpson_end;
  sum += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  return sum;
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

QuadResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  double absolute = kWgk[7] * std::abs(fc);
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kXgk[k];
    const double f1 = f(center - dx), f2 = f(center + dx);
    kronrod += kWgk[k] * (f1 + f2);
    absolute += kWgk[k] * (std::abs(f1) + std::abs(f2));
    if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
  }
  // The estimate never drops below the roundoff level of the rule.
  const double roundoff =
      50.0 * std::numeric_limits<double>::epsilon() * absolute * std::abs(half);
  const double err = std::max(std::abs((kronrod - gauss) * half), roundoff);
  return {kronrod * half, err, 15, roundoff};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, QuadResult& acc) {
  QuadResult r = gk15(f, a, b);
  acc.evaluations += r.evaluations;
  if (r.error <= tol || r.error <= r.roundoff || depth <= 0) {
    acc.value += r.value;
    acc.error += r.error;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol, depth - 1, acc);
  adapt(f, mid, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadResult gauss_kronrod(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0))
    fail(ErrorCode::invalid_argument, "quadrature tolerance must be positive");
  QuadResult acc;
  if (a == b) return acc;
  adapt(f, a, b, abs_tol, max_depth, acc);
  return acc;
}

}  // namespace isospec
