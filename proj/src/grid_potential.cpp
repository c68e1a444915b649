#include "isospec/grid_potential.hpp"

#include <algorithm>
#include <cmath>

#include "isospec/error.hpp"

namespace isospec {

GridPotential::GridPotential(double length, int intervals,
                             std::vector<double> samples, std::string label)
    : length_(length),
      intervals_(intervals),
      samples_(std::move(samples)),
      label_(std::move(label)) {
  if (!(length > 0.0) || !std::isfinite(length))
    fail(ErrorCode::invalid_argument, "potential length must be positive");
  if (intervals < 2)
    fail(ErrorCode::invalid_argument, "potential needs at least 2 intervals");
  if (samples_.size() != static_cast<std::size_t>(intervals) + 1)
    fail(ErrorCode::invalid_argument,
         "potential needs n+1 samples, got " + std::to_string(samples_.size()));
  for (double v : samples_)
    if (!std::isfinite(v))
      fail(ErrorCode::invalid_argument, "potential samples must be finite");
}

int GridPotential::stencil_start(int interval) const noexcept {
  if (intervals_ < 3) return 0;
  return std::clamp(interval - 1, 0, intervals_ - 3);
}

CubicPiece GridPotential::piece(int interval) const {
  interval = std::clamp(interval, 0, intervals_ - 1);
  const int start = stencil_start(interval);
  const int npts = std::min(4, intervals_ + 1);

  // Lagrange basis expanded into monomials of s = (x - x_i)/h.
  CubicPiece p;
  p.x0 = node(interval);
  p.h = spacing();
  for (int k = 0; k < npts; ++k) {
    std::array<double, 4> basis{1.0, 0.0, 0.0, 0.0};
    double denom = 1.0;
    const double sk = start + k - interval;
    for (int m = 0; m < npts; ++m) {
      if (m == k) continue;
      const double sm = start + m - interval;
      for (int d = 3; d >= 1; --d) basis[d] = basis[d - 1] - sm * basis[d];
      basis[0] = -sm * basis[0];
      denom *= sk - sm;
    }
    const double w = samples_[start + k] / denom;
    for (int d = 0; d < 4; ++d) p.c[d] += w * basis[d];
  }
  return p;
}

std::pair<double, double> GridPotential::piece_range(int interval) const {
  interval = std::clamp(interval, 0, intervals_ - 1);
  const int start = stencil_start(interval);
  const int stop = std::min(start + 4, intervals_ + 1);
  const auto [lo, hi] =
      std::minmax_element(samples_.begin() + start, samples_.begin() + stop);
  return {*lo, *hi};
}

double GridPotential::operator()(double x) const {
  const double h = spacing();
  int i = static_cast<int>(std::floor(x / h));
  i = std::clamp(i, 0, intervals_ - 1);
  return piece(i)(x);
}

bool is_builtin_name(const std::string& name) {
  return name == "zero" || name == "linear" || name == "quadratic";
}

GridPotential builtin_potential(const std::string& name, double length,
                                int intervals) {
  if (!is_builtin_name(name))
    fail(ErrorCode::invalid_argument, "unknown builtin potential '" + name + "'");
  if (intervals < 2)
    fail(ErrorCode::invalid_argument, "potential needs at least 2 intervals");
  std::vector<double> v(static_cast<std::size_t>(intervals) + 1, 0.0);
  const double h = length / intervals;
  for (int i = 0; i <= intervals; ++i) {
    const double x = i == intervals ? length : i * h;
    if (name == "linear") v[i] = x;
    if (name == "quadratic") v[i] = x * x;
  }
  return GridPotential(length, intervals, std::move(v), name);
}

}  // namespace isospec
