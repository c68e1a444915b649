#include "isospec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isospec/error.hpp"
#include "isospec/reconstruct.hpp"

namespace isospec {

IsospectralRecord check_isospectral(const GridPotential& pot,
                                    std::span<const double> target, int count,
                                    double tol, const EigenOptions& solver) {
  if (count < 1 || static_cast<std::size_t>(count) > target.size())
    fail(ErrorCode::invalid_argument,
         "J' must be between 1 and the number of target eigenvalues");
  const EigenSolveReport report = eigenvalues(pot, count, solver);
  IsospectralRecord rec;
  for (int j = 0; j < count; ++j) {
    const double dev =
        std::abs(report.eigenvalues[j] - target[j]) / std::abs(target[j]);
    rec.eig_dev = std::max(rec.eig_dev, dev);
  }
  rec.pass = rec.eig_dev <= tol;
  return rec;
}

double l1_distance(const GridPotential& a, const GridPotential& b,
                   double radius) {
  if (!a.same_grid(b))
    fail(ErrorCode::grid_mismatch, "potentials live on different grids");
  const double h = a.spacing();
  double sum = 0.0;
  for (int i = 1; i <= a.intervals() && a.node(i) <= radius * (1 + 1e-14); ++i) {
    const double d0 = std::abs(a.samples()[i - 1] - b.samples()[i - 1]);
    const double d1 = std::abs(a.samples()[i] - b.samples()[i]);
    sum += 0.5 * h * (d0 + d1);
  }
  return sum;
}

IsospectralityReport path_report(const IsospectralPath& path,
                                 const GridPotential& pot0,
                                 std::span<const double> ts,
                                 const VerifyTolerances& tol) {
  check_path_matches(path, pot0);
  std::vector<double> sorted(ts.begin(), ts.end());
  std::sort(sorted.begin(), sorted.end());

  const std::vector<int> support = path.support();
  const int J = static_cast<int>(path.base().size());
  IsospectralityReport report;
  report.tolerances = tol;
  report.compared = std::clamp(J - static_cast<int>(support.size()) - tol.margin, 1, J);
  report.radius = tol.radius_fraction * pot0.length();
  int solve_count = report.compared;
  for (int j : support) solve_count = std::max(solve_count, j + 1);

  const OverlapTable table =
      overlap_table(pot0, path.base(), support, tol.solver.ode_tol);
  const auto& target = path.base().eigenvalues();

  std::vector<GridPotential> potentials;
  for (double t : sorted) {
    IsospectralRecord rec;
    rec.t = t;
    ReconstructionResult recon;
    try {
      recon = reconstruct_with(path, pot0, table, t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::nonpositive_determinant) throw;
      rec.det_positive = false;
      rec.eig_dev = std::numeric_limits<double>::infinity();
      rec.weight_dev = std::numeric_limits<double>::infinity();
      rec.pass = false;
      report.records.push_back(rec);
      continue;
    }
    const EigenSolveReport eig =
        eigenvalues(recon.potential, solve_count, tol.solver);
    for (int j = 0; j < report.compared; ++j)
      rec.eig_dev = std::max(
          rec.eig_dev, std::abs(eig.eigenvalues[j] - target[j]) / std::abs(target[j]));
    if (!support.empty()) {
      EigenSolveReport sub;
      for (int j : support) sub.eigenvalues.push_back(eig.eigenvalues[j]);
      const std::vector<double> w =
          norming_constants(recon.potential, sub, tol.solver.ode_tol);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double expected = path.weight_at(support[k], t);
        rec.weight_dev =
            std::max(rec.weight_dev, std::abs(w[k] - expected) / expected);
      }
    }
    rec.det_positive = recon.min_det > 0.0;
    rec.pass = rec.det_positive && rec.eig_dev <= tol.eigen &&
               rec.weight_dev <= tol.weight;
    report.records.push_back(rec);
    potentials.push_back(std::move(recon.potential));
  }
  if (potentials.size() == sorted.size())
    for (std::size_t i = 1; i < potentials.size(); ++i)
      report.l1_increments.push_back(
          l1_distance(potentials[i], potentials[i - 1], report.radius));
  report.pass = !report.records.empty() &&
                std::all_of(report.records.begin(), report.records.end(),
                            [](const IsospectralRecord& r) { return r.pass; });
  return report;
}

}  // namespace isospec
