#pragma once

#include <complex>
#include <vector>

#include "isospec/grid_potential.hpp"
#include "isospec/measure.hpp"

namespace isospec {

struct EigenOptions {
  double phase_tol = 1e-12;   // |theta mismatch - (j-1) pi| target
  double ode_tol = 1e-11;     // integrator tolerance per unit length
  double search_max = 1e8;    // bracket search gives up above min V + this
  int max_iterations = 200;
};

struct EigenSolveReport {
  std::vector<double> eigenvalues;
  std::vector<double> residuals;  // final |phase mismatch - (j-1) pi|
  std::vector<int> iterations;
  double match_point = 0.0;
};

/// Solution of -u'' + V u = E u with u(0) = 0, u'(0) = 1, sampled at nodes.
struct RegularSolution {
  double energy = 0.0;
  std::vector<double> values;
  std::vector<double> derivatives;
};

/// Real constant of the Herglotz representation, optionally with a model of
/// the discarded part of a truncated measure: beyond `tail_start` the mass is
/// taken from the constant-potential density (1/pi) sqrt(lambda - tail_shift).
struct MFunctionFit {
  double c = 0.0;
  std::complex<double> anchor{0.0, 1.0};
  bool tail = false;
  double tail_start = 0.0;
  double tail_shift = 0.0;
  double anchor_residual = 0.0;  // |Im| left over at the anchor
};

/// Phase mismatch D(E) = theta_left(x_m) - theta_right(x_m) of the two-sided
/// Pruefer shooting problem. Strictly increasing in E; E is the j-th
/// Dirichlet eigenvalue iff D(E) = (j-1) pi.
double phase_mismatch(const GridPotential& pot, double energy, int match_node,
                      double ode_tol = 1e-11);

/// Node used to join forward and backward shots: the minimiser of V
/// (middle of the tie set).
int match_node(const GridPotential& pot);

EigenSolveReport eigenvalues(const GridPotential& pot, int count,
                             const EigenOptions& opts = {});

RegularSolution regular_solution(const GridPotential& pot, double energy,
                                 double ode_tol = 1e-11);

/// Regular solution at an eigenvalue, built from a forward shot on
/// [0, x_m] and a backward shot from the Dirichlet wall on [x_m, L] so the
/// decaying tail is resolved. Normalised to phi(0) = 0, phi'(0) = 1.
RegularSolution eigenfunction(const GridPotential& pot, double energy,
                              double ode_tol = 1e-11);

/// |sin| of the phase mismatch left at the join; ~0 at an eigenvalue.
double join_defect(const GridPotential& pot, double energy,
                   double ode_tol = 1e-11);

std::vector<double> norming_constants(const GridPotential& pot,
                                      const EigenSolveReport& report,
                                      double ode_tol = 1e-11);

/// max |phi| over the last tenth of [0, L] relative to max |phi|.
double tail_ratio(const GridPotential& pot, const RegularSolution& phi);

struct ForwardOptions {
  EigenOptions eigen;
  bool check_truncation = false;
  double truncation_threshold = 1e-12;
};

SpectralMeasure spectral_measure(const GridPotential& pot, int count,
                                 const ForwardOptions& opts = {},
                                 EigenSolveReport* report = nullptr);

/// sqrt with Im >= 0.
std::complex<double> upper_sqrt(std::complex<double> z);

std::complex<double> weyl_m_ode(const GridPotential& pot,
                                std::complex<double> z,
                                double ode_tol = 1e-11);

std::complex<double> m_from_measure(const SpectralMeasure& measure,
                                    const MFunctionFit& fit,
                                    std::complex<double> z);

/// int_{start}^inf [1/(l - z) - l/(1 + l^2)] (1/pi) sqrt(l - shift) dl.
std::complex<double> reference_tail(double start, double shift,
                                    std::complex<double> z);

/// Fits the real constant c at the anchor against the ODE route. With
/// `with_tail` the truncated measure is continued past the midpoint after
/// its last eigenvalue by the reference density with shift V(0).
MFunctionFit fit_m_constant(const GridPotential& pot,
                            const SpectralMeasure& measure,
                            std::complex<double> anchor = {0.0, 1.0},
                            bool with_tail = true);

double free_measure_density(double energy);

}  // namespace isospec
