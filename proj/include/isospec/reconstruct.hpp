#pragma once

#include <span>
#include <string>
#include <vector>

#include "isospec/forward.hpp"
#include "isospec/grid_potential.hpp"
#include "isospec/measure.hpp"

namespace isospec {

/// Reference eigenfunctions phi_j on the perturbed set S and their running
/// overlaps P_jk(x) = int_0^x phi_j phi_k.
struct OverlapTable {
  std::vector<int> support;              // 0-based eigenvalue indices
  std::vector<std::vector<double>> phi;  // phi[a][node]
  std::vector<double> overlaps;          // node-major, |S| x |S| per node
  double error_estimate = 0.0;           // Simpson vs Hermite-corrected trapezoid

  int rank() const noexcept { return static_cast<int>(support.size()); }
  int nodes() const noexcept {
    return phi.empty() ? 0 : static_cast<int>(phi.front().size());
  }
  double overlap(int node, int a, int b) const {
    const int s = rank();
    return overlaps[(static_cast<std::size_t>(node) * s + a) * s + b];
  }
};

OverlapTable overlap_table(const GridPotential& pot0,
                           const SpectralMeasure& measure0,
                           const std::vector<int>& support,
                           double ode_tol = 1e-11);

struct ReconstructionOptions {
  double condition_warn = 1e10;
  double ode_tol = 1e-11;
};

struct ReconstructionResult {
  double t = 0.0;
  GridPotential potential;
  std::vector<double> det_track;  // det(I + D(t) P(x_i))
  double min_det = 1.0;
  double max_condition = 1.0;
  std::vector<int> support;
  double base_weight_mismatch = 0.0;  // max |a_j P_jj(L) - 1| over S
  std::vector<std::string> warnings;
};

/// Checks that `path.base()` was computed from `pot0`.
void check_path_matches(const IsospectralPath& path, const GridPotential& pot0);

/// V_t = V_0 - 2 (d^2/dx^2) ln det(I + D(t) P(x)).
ReconstructionResult reconstruct_at(const IsospectralPath& path,
                                    const GridPotential& pot0, double t,
                                    const ReconstructionOptions& opts = {});

ReconstructionResult reconstruct_with(const IsospectralPath& path,
                                      const GridPotential& pot0,
                                      const OverlapTable& table, double t,
                                      const ReconstructionOptions& opts = {});

/// ln det(I + D(t) P(x_i)) at every node (for derivative cross-checks).
std::vector<double> log_det_track(const IsospectralPath& path,
                                  const OverlapTable& table, double t);

/// d/dx of samples with 5-point stencils (one-sided at the four edge nodes).
std::vector<double> five_point_derivative(std::span<const double> f, double h);

/// Closed-form rank-one reconstruction:
/// V = V_0 - 2 (d^2/dx^2) ln(1 + delta_c int_0^x phi^2).
GridPotential rank_one_oracle(const GridPotential& pot0,
                              const RegularSolution& phi, double delta_c);

struct SmoothnessDiagnostic {
  std::vector<double> chebyshev_nodes;  // in t
  std::vector<double> probes;           // off-node t values
  std::vector<double> max_deviation;    // per grid node
  double max_inner = 0.0;               // over the inner half x <= L/2
};

struct PathReconstruction {
  std::vector<ReconstructionResult> results;
  SmoothnessDiagnostic smoothness;
};

PathReconstruction reconstruct_path(const IsospectralPath& path,
                                    const GridPotential& pot0,
                                    std::span<const double> ts,
                                    const ReconstructionOptions& opts = {},
                                    bool smoothness = true);

SmoothnessDiagnostic smoothness_in_t(const IsospectralPath& path,
                                     const GridPotential& pot0,
                                     const OverlapTable& table,
                                     int chebyshev_count = 16,
                                     int probe_count = 50,
                                     const ReconstructionOptions& opts = {});

}  // namespace isospec
