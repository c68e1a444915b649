#pragma once

#include <string>
#include <vector>

#include "isospec/measure.hpp"

namespace isospec {

/// Uniform grid first, ..., last with `count` points.
struct AlphaGrid {
  double first = 0.0;
  double last = 1.0;
  int count = 2;

  double at(int i) const {
    if (i == count - 1) return last;
    return count > 1 ? first + i * ((last - first) / (count - 1)) : first;
  }
  friend bool operator==(const AlphaGrid&, const AlphaGrid&) = default;
};

enum class AKind { difference, regularized };

const char* kind_name(AKind kind);

struct AFunction {
  AlphaGrid grid;
  std::vector<double> values;
  std::vector<double> residuals;  // zero for the difference kind
  AKind kind = AKind::difference;
};

/// lambda^{-1/2} sin(2 alpha sqrt(lambda)), continued analytically to
/// lambda <= 0 (sinh branch, 2 alpha at 0).
double a_kernel(double lambda, double alpha);

/// A_A - A_B for two measures on one eigenvalue list (finite sum, exact).
AFunction delta_a(const SpectralMeasure& a, const SpectralMeasure& b,
                  const AlphaGrid& grid);

struct RegularizationOptions {
  std::vector<double> schedule;  // decreasing Abel parameters; empty = default
  int depth = 4;                 // trailing levels used by the extrapolation
  double quad_tol = 1e-11;
};

/// 1e-2, 5e-3, 2.5e-3, ... (`levels` entries).
std::vector<double> default_abel_schedule(int levels = 12);

struct FreeTerm {
  double value = 0.0;
  double error = 0.0;
};

/// (1/pi) int_0^inf sin(2 alpha sqrt(lambda)) e^{-eps lambda} d lambda, by
/// adaptive quadrature in k = sqrt(lambda).
FreeTerm free_abel_term(double alpha, double eps, double abs_tol);

/// Abel-regularised A of a single measure, extrapolated eps -> 0.
AFunction a_regularized(const SpectralMeasure& m, const AlphaGrid& grid,
                        const RegularizationOptions& opts = {});

AFunction interpolate_a(const AFunction& a0, const AFunction& a1, double t);

}  // namespace isospec
