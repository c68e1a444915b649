#pragma once

#include <span>
#include <vector>

#include "isospec/forward.hpp"
#include "isospec/measure.hpp"

namespace isospec {

struct IsospectralRecord {
  double t = 0.0;
  double eig_dev = 0.0;     // max relative eigenvalue deviation
  double weight_dev = 0.0;  // max relative norming-constant deviation on S
  bool det_positive = true;
  bool pass = false;
};

struct VerifyTolerances {
  double eigen = 1e-5;
  double weight = 1e-4;
  double radius_fraction = 0.5;  // R = fraction * L for the L1 increments
  int margin = 2;                // compare J - |S| - margin eigenvalues
  EigenOptions solver;
};

struct IsospectralityReport {
  VerifyTolerances tolerances;
  int compared = 0;
  double radius = 0.0;
  std::vector<IsospectralRecord> records;
  std::vector<double> l1_increments;  // ||V_{t_{i+1}} - V_{t_i}||_{L1[0,R]}
  bool pass = false;
};

IsospectralRecord check_isospectral(const GridPotential& pot,
                                    std::span<const double> target, int count,
                                    double tol,
                                    const EigenOptions& solver = {});

/// Trapezoid L1 norm of a - b over the nodes with x <= radius.
double l1_distance(const GridPotential& a, const GridPotential& b,
                   double radius);

IsospectralityReport path_report(const IsospectralPath& path,
                                 const GridPotential& pot0,
                                 std::span<const double> ts,
                                 const VerifyTolerances& tol = {});

}  // namespace isospec
