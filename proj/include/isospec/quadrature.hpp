#pragma once

#include <functional>
#include <span>
#include <vector>

namespace isospec {

/// Composite Simpson over equally spaced samples; an odd number of
/// intervals closes with the 3/8 rule on the last three.
double simpson(std::span<const double> f, double h);

/// Cumulative integral int_0^{x_i} f at every node: Simpson pairs for even
/// nodes, the one-interval (5, 8, -1)/12 rule for odd nodes.
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  double roundoff = 0.0;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b], absolute tolerance.
QuadResult gauss_kronrod(const std::function<double(double)>& f, double a,
                         double b, double abs_tol, int max_depth = 40);

}  // namespace isospec
