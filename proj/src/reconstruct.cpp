#include "isospec/reconstruct.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isospec/error.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

std::string format_t(double t) {
  std::ostringstream s;
  s.precision(17);
  s << t;
  return s.str();
}

std::vector<double> weight_changes(const IsospectralPath& path,
                                   const OverlapTable& table, double t) {
  std::vector<double> d(table.rank());
  for (int a = 0; a < table.rank(); ++a) {
    const int j = table.support[a];
    d[a] = path.weight_at(j, t) - path.base().weights()[j];
  }
  return d;
}

struct NodeSolve {
  double det = 1.0;
  double log_det = 0.0;
  double trace = 0.0;  // phi^T (I + D P)^{-1} D phi
  double condition = 1.0;
};

NodeSolve solve_node(const OverlapTable& table, const std::vector<double>& d,
                     int node) {
  const int s = table.rank();
  NodeSolve out;
  if (s == 1) {
    const double m = 1.0 + d[0] * table.overlap(node, 0, 0);
    const double phi = table.phi[0][node];
    out.det = m;
    out.log_det = m > 0.0 ? std::log(m) : 0.0;
    out.trace = d[0] * phi * phi / m;
    out.condition = 1.0;
    return out;
  }
  Eigen::MatrixXd m(s, s);
  Eigen::VectorXd phi(s), dphi(s);
  for (int a = 0; a < s; ++a) {
    phi[a] = table.phi[a][node];
    dphi[a] = d[a] * phi[a];
    for (int b = 0; b < s; ++b)
      m(a, b) = (a == b ? 1.0 : 0.0) + d[a] * table.overlap(node, a, b);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  out.det = lu.determinant();
  out.log_det = out.det > 0.0 ? std::log(out.det) : 0.0;
  out.trace = phi.dot(lu.solve(dphi));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  out.condition = sv[s - 1] > 0.0 ? sv[0] / sv[s - 1]
                                  : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

std::vector<double> five_point_derivative(std::span<const double> f,
                                          double h) {
  const std::size_t n = f.size();
  if (n < 5)
    fail(ErrorCode::invalid_argument,
         "five-point derivative needs at least 5 nodes");
  std::vector<double> d(n);
  const double w = 1.0 / (12.0 * h);
  d[0] = w * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] -
              3.0 * f[4]);
  d[1] = w * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = w * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  const std::size_t k = n - 1;
  d[k - 1] = -w * (-3.0 * f[k] - 10.0 * f[k - 1] + 18.0 * f[k - 2] -
                   6.0 * f[k - 3] + f[k - 4]);
  d[k] = -w * (-25.0 * f[k] + 48.0 * f[k - 1] - 36.0 * f[k - 2] +
               16.0 * f[k - 3] - 3.0 * f[k - 4]);
  return d;
}

OverlapTable overlap_table(const GridPotential& pot0,
                           const SpectralMeasure& measure0,
                           const std::vector<int>& support, double ode_tol) {
  const int count = static_cast<int>(measure0.size());
  for (int j : support)
    if (j < 0 || j >= count)
      fail(ErrorCode::invalid_argument,
           "support index " + std::to_string(j + 1) + " out of range");
  OverlapTable table;
  table.support = support;
  const int s = table.rank();
  const int nodes = pot0.intervals() + 1;
  const double h = pot0.spacing();
  std::vector<std::vector<double>> dphi;
  for (int j : support) {
    RegularSolution phi = eigenfunction(pot0, measure0.eigenvalues()[j], ode_tol);
    table.phi.push_back(std::move(phi.values));
    dphi.push_back(std::move(phi.derivatives));
  }
  table.overlaps.assign(static_cast<std::size_t>(nodes) * s * s, 0.0);
  std::vector<double> prod(nodes);
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b) {
      for (int i = 0; i < nodes; ++i) prod[i] = table.phi[a][i] * table.phi[b][i];
      const std::vector<double> cum = cumulative_simpson(prod, h);
      double hermite = 0.0;
      for (int i = 0; i < nodes; ++i) {
        if (i > 0) {
          const double g0 = dphi[a][i - 1] * table.phi[b][i - 1] +
                            table.phi[a][i - 1] * dphi[b][i - 1];
          const double g1 =
              dphi[a][i] * table.phi[b][i] + table.phi[a][i] * dphi[b][i];
          hermite += 0.5 * h * (prod[i - 1] + prod[i]) + h * h / 12.0 * (g0 - g1);
        }
        table.error_estimate =
            std::max(table.error_estimate, std::abs(cum[i] - hermite));
        const std::size_t base = static_cast<std::size_t>(i) * s * s;
        table.overlaps[base + a * s + b] = cum[i];
        table.overlaps[base + b * s + a] = cum[i];
      }
    }
  return table;
}

void check_path_matches(const IsospectralPath& path,
                        const GridPotential& pot0) {
  const Provenance& p = path.base().provenance();
  if (p.length != pot0.length() || p.intervals != pot0.intervals() ||
      p.source != pot0.label())
    fail(ErrorCode::provenance_mismatch,
         "path base measure was not computed from potential '" + pot0.label() +
             "' (L = " + std::to_string(pot0.length()) +
             ", n = " + std::to_string(pot0.intervals()) + ")");
}

ReconstructionResult reconstruct_with(const IsospectralPath& path,
                                      const GridPotential& pot0,
                                      const OverlapTable& table, double t,
                                      const ReconstructionOptions& opts) {
  if (!std::isfinite(t)) fail(ErrorCode::invalid_argument, "t must be finite");
  if (table.nodes() != 0 && table.nodes() != pot0.intervals() + 1)
    fail(ErrorCode::grid_mismatch, "overlap table does not match the grid");
  const int nodes = pot0.intervals() + 1;
  const double h = pot0.spacing();
  const std::vector<double> d = weight_changes(path, table, t);

  ReconstructionResult r;
  r.t = t;
  r.support = table.support;
  r.det_track.assign(nodes, 1.0);
  for (int a = 0; a < table.rank(); ++a) {
    const int j = table.support[a];
    const double mismatch =
        std::abs(path.base().weights()[j] * table.overlap(nodes - 1, a, a) - 1.0);
    r.base_weight_mismatch = std::max(r.base_weight_mismatch, mismatch);
  }
  if (r.base_weight_mismatch > 1e-6)
    r.warnings.push_back("base weights disagree with the potential's "
                         "eigenfunction norms (max rel " +
                         std::to_string(r.base_weight_mismatch) + ")");

  const bool identity = std::all_of(d.begin(), d.end(),
                                    [](double v) { return v == 0.0; });
  if (identity) {
    r.potential = pot0;
    return r;
  }

  std::vector<double> g(nodes);
  for (int i = 0; i < nodes; ++i) {
    const NodeSolve s = solve_node(table, d, i);
    if (!(s.det > 0.0))
      fail(ErrorCode::nonpositive_determinant,
           "det(I + D P) = " + std::to_string(s.det) + " at x = " +
               std::to_string(pot0.node(i)) + ", t = " + format_t(t) +
               " (weights along the path must stay positive)");
    r.det_track[i] = s.det;
    r.min_det = std::min(r.min_det, s.det);
    r.max_condition = std::max(r.max_condition, s.condition);
    g[i] = s.trace;
  }
  if (r.max_condition > opts.condition_warn)
    r.warnings.push_back("condition estimate " +
                         std::to_string(r.max_condition) +
                         " exceeds the warning threshold");

  const std::vector<double> dg = five_point_derivative(g, h);
  std::vector<double> v(pot0.samples().begin(), pot0.samples().end());
  for (int i = 0; i < nodes; ++i) v[i] -= 2.0 * dg[i];
  r.potential = GridPotential(pot0.length(), pot0.intervals(), std::move(v),
                              pot0.label() + " @ t=" + format_t(t));
  return r;
}

ReconstructionResult reconstruct_at(const IsospectralPath& path,
                                    const GridPotential& pot0, double t,
                                    const ReconstructionOptions& opts) {
  check_path_matches(path, pot0);
  const OverlapTable table =
      overlap_table(pot0, path.base(), path.support(), opts.ode_tol);
  return reconstruct_with(path, pot0, table, t, opts);
}

std::vector<double> log_det_track(const IsospectralPath& path,
                                  const OverlapTable& table, double t) {
  const std::vector<double> d = weight_changes(path, table, t);
  std::vector<double> out(table.nodes(), 0.0);
  if (table.rank() == 0) return out;
  for (int i = 0; i < table.nodes(); ++i) {
    const NodeSolve s = solve_node(table, d, i);
    if (!(s.det > 0.0))
      fail(ErrorCode::nonpositive_determinant, "nonpositive determinant");
    out[i] = s.log_det;
  }
  return out;
}

GridPotential rank_one_oracle(const GridPotential& pot0,
                              const RegularSolution& phi, double delta_c) {
  const int nodes = pot0.intervals() + 1;
  if (static_cast<int>(phi.values.size()) != nodes)
    fail(ErrorCode::grid_mismatch, "solution does not match the grid");
  if (delta_c == 0.0) return pot0;
  const double h = pot0.spacing();
  std::vector<double> sq(nodes);
  for (int i = 0; i < nodes; ++i) sq[i] = phi.values[i] * phi.values[i];
  const std::vector<double> q = cumulative_simpson(sq, h);
  std::vector<double> dlog(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double arg = 1.0 + delta_c * q[i];
    if (!(arg > 0.0))
      fail(ErrorCode::nonpositive_determinant,
           "1 + delta_c int phi^2 is not positive at x = " +
               std::to_string(pot0.node(i)));
    dlog[i] = delta_c * sq[i] / arg;
  }
  std::vector<double> v(pot0.samples().begin(), pot0.samples().end());
  const std::vector<double> d2 = five_point_derivative(dlog, h);
  for (int i = 0; i < nodes; ++i) v[i] -= 2.0 * d2[i];
  return GridPotential(pot0.length(), pot0.intervals(), std::move(v),
                       pot0.label() + " rank-one");
}

SmoothnessDiagnostic smoothness_in_t(const IsospectralPath& path,
                                     const GridPotential& pot0,
                                     const OverlapTable& table,
                                     int chebyshev_count, int probe_count,
                                     const ReconstructionOptions& opts) {
  SmoothnessDiagnostic diag;
  const int nodes = pot0.intervals() + 1;
  const int m = chebyshev_count;
  std::vector<double> bary(m);
  std::vector<std::vector<double>> at_nodes;
  for (int k = 0; k < m; ++k) {
    const double angle = (2.0 * k + 1.0) * std::numbers::pi / (2.0 * m);
    diag.chebyshev_nodes.push_back(0.5 - 0.5 * std::cos(angle));
    bary[k] = (k % 2 == 0 ? 1.0 : -1.0) * std::sin(angle);
    const auto r = reconstruct_with(path, pot0, table, diag.chebyshev_nodes[k], opts);
    at_nodes.emplace_back(r.potential.samples().begin(), r.potential.samples().end());
  }
  diag.max_deviation.assign(nodes, 0.0);
  for (int p = 0; p < probe_count; ++p) {
    const double t = (p + 0.5) / probe_count;
    diag.probes.push_back(t);
    const auto direct = reconstruct_with(path, pot0, table, t, opts);
    std::vector<double> c(m);
    double denom = 0.0;
    for (int k = 0; k < m; ++k) {
      c[k] = bary[k] / (t - diag.chebyshev_nodes[k]);
      denom += c[k];
    }
    for (int i = 0; i < nodes; ++i) {
      double num = 0.0;
      for (int k = 0; k < m; ++k) num += c[k] * at_nodes[k][i];
      const double dev = std::abs(num / denom - direct.potential.samples()[i]);
      diag.max_deviation[i] = std::max(diag.max_deviation[i], dev);
    }
  }
  for (int i = 0; i < nodes; ++i) {
    const double x = pot0.node(i);
    if (x <= 0.5 * pot0.length())
      diag.max_inner = std::max(diag.max_inner, diag.max_deviation[i]);
  }
  return diag;
}

PathReconstruction reconstruct_path(const IsospectralPath& path,
                                    const GridPotential& pot0,
                                    std::span<const double> ts,
                                    const ReconstructionOptions& opts,
                                    bool smoothness) {
  check_path_matches(path, pot0);
  const OverlapTable table =
      overlap_table(pot0, path.base(), path.support(), opts.ode_tol);
  PathReconstruction out;
  for (double t : ts) out.results.push_back(reconstruct_with(path, pot0, table, t, opts));
  if (smoothness) out.smoothness = smoothness_in_t(path, pot0, table, 16, 50, opts);
  return out;
}

}  // namespace isospec
