#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "isospec/error.hpp"

namespace isospec {

/// Step-size control for the embedded Dormand-Prince 5(4) pair.
struct StepControl {
  double tol_per_length = 1e-11;  // local error allowed per unit of x
  double scale_floor = 0.0;       // error is measured against max(floor, |y|)
  double max_step = 0.0;          // 0 = unlimited
  int max_steps = 1'000'000;
};

namespace detail {

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T, std::size_t N>
double state_norm(const std::array<T, N>& y) {
  double m = 0.0;
  for (const auto& v : y) m = std::max(m, magnitude(v));
  return m;
}

}  // namespace detail

/// Integrates y' = f(x, y) from x to x_end (either direction), taking
/// adaptive substeps. `h` carries the step-size guess between calls.
/// `on_step(x, y)` is invoked after every accepted substep.
/// Returns the number of accepted substeps.
template <class T, std::size_t N, class Rhs, class OnStep>
int dopri5_advance(Rhs&& f, double x, double x_end, std::array<T, N>& y,
                   double& h, const StepControl& ctl, OnStep&& on_step) {
  using State = std::array<T, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = x_end - x;
  if (span == 0.0) return 0;
  const double dir = span > 0 ? 1.0 : -1.0;
  double hmax = std::abs(span);
  if (ctl.max_step > 0) hmax = std::min(hmax, ctl.max_step);
  double habs = std::abs(h) > 0 ? std::min(std::abs(h), hmax) : hmax;

  auto axpy = [](const State& base, double s, std::initializer_list<double> w,
                 std::initializer_list<const State*> k) {
    State out = base;
    auto wi = w.begin();
    for (auto ki = k.begin(); ki != k.end(); ++ki, ++wi)
      for (std::size_t i = 0; i < N; ++i) out[i] += s * (*wi) * (**ki)[i];
    return out;
  };

  State k1 = f(x, y), k2, k3, k4, k5, k6, k7;
  int accepted = 0;
  int attempts = 0;
  while (dir * (x_end - x) > 0) {
    if (++attempts > ctl.max_steps)
      fail(ErrorCode::no_convergence, "ODE integrator exceeded step budget");
    bool last = false;
    const double h_trial = habs;
    if (habs >= std::abs(x_end - x)) {
      habs = std::abs(x_end - x);
      last = true;
    }
    const double hs = dir * habs;
    k2 = f(x + c2 * hs, axpy(y, hs, {a21}, {&k1}));
    k3 = f(x + c3 * hs, axpy(y, hs, {a31, a32}, {&k1, &k2}));
    k4 = f(x + c4 * hs, axpy(y, hs, {a41, a42, a43}, {&k1, &k2, &k3}));
    k5 = f(x + c5 * hs,
           axpy(y, hs, {a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}));
    k6 = f(x + hs,
           axpy(y, hs, {a61, a62, a63, a64, a65}, {&k1, &k2, &k3, &k4, &k5}));
    State y5 = axpy(y, hs, {b1, b3, b4, b5, b6}, {&k1, &k3, &k4, &k5, &k6});
    const double x_next = last ? x_end : x + hs;
    k7 = f(x_next, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const T d = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                        e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, detail::magnitude(d));
    }
    const double scale = std::max(
        {ctl.scale_floor, detail::state_norm(y), detail::state_norm(y5)});
    const double allowed = ctl.tol_per_length * habs * scale;
    if (!std::isfinite(err))
      fail(ErrorCode::overflow, "ODE state became non-finite");

    if (err <= allowed || scale == 0.0) {
      x = x_next;
      y = y5;
      k1 = k7;
      ++accepted;
      on_step(x, y);
      const double grow =
          err == 0.0 ? 5.0
                     : std::clamp(0.9 * std::pow(allowed / err, 0.25), 0.2, 5.0);
      habs = last ? std::max(habs, h_trial) : std::min(hmax, habs * grow);
    } else {
      habs *= std::clamp(0.9 * std::pow(allowed / err, 0.25), 0.1, 0.9);
      if (habs < 1e-14 * (1.0 + std::abs(x)))
        fail(ErrorCode::no_convergence, "ODE step size underflow");
    }
  }
  h = dir * habs;
  return accepted;
}

}  // namespace isospec
