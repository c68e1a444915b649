#include "isospec/forward.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "isospec/error.hpp"
#include "isospec/ode.hpp"
#include "isospec/quadrature.hpp"

namespace isospec {

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

using Vec2 = std::array<double, 2>;

constexpr double kRescaleHigh = 1e100;
constexpr double kRescaleLow = 1e-100;

struct PieceTable {
  explicit PieceTable(const GridPotential& pot) {
    const int n = pot.intervals();
    pieces.reserve(n);
    ranges.reserve(n);
    for (int i = 0; i < n; ++i) {
      pieces.push_back(pot.piece(i));
      ranges.push_back(pot.piece_range(i));
    }
  }
  std::vector<CubicPiece> pieces;
  std::vector<std::pair<double, double>> ranges;
};

struct Shot {
  std::vector<double> u;   // indexed by node; only the shot's span is filled
  std::vector<double> du;
  double phase = 0.0;
  Vec2 end{};
};

// Integrates (u, u')' = (u', (V - E) u) node to node from `from` to `to`,
// tracking the continuous Pruefer angle atan2(u, u'). Node values are kept
// up to a common positive factor (rescaled against overflow).
Shot shoot(const GridPotential& pot, const PieceTable& table, double energy,
           int from, int to, Vec2 y, double phase, double ode_tol, bool store) {
  const int n = pot.intervals();
  Shot shot;
  if (store) {
    shot.u.assign(n + 1, 0.0);
    shot.du.assign(n + 1, 0.0);
    shot.u[from] = y[0];
    shot.du[from] = y[1];
  }
  const int dir = to >= from ? 1 : -1;
  StepControl ctl;
  ctl.tol_per_length = ode_tol;
  double h = 0.0;
  Vec2 prev = y;
  for (int node = from; node != to; node += dir) {
    const int interval = dir > 0 ? node : node - 1;
    const CubicPiece& piece = table.pieces[interval];
    const auto [vlo, vhi] = table.ranges[interval];
    const double rate =
        std::max({1.0, std::abs(energy - vlo), std::abs(energy - vhi)});
    ctl.max_step = std::min(pot.spacing(), 0.5 / rate);
    auto rhs = [&](double x, const Vec2& s) -> Vec2 {
      return {s[1], (piece(x) - energy) * s[0]};
    };
    auto on_step = [&](double, const Vec2& s) {
      const double cross = prev[1] * s[0] - prev[0] * s[1];
      const double dot = prev[1] * s[1] + prev[0] * s[0];
      phase += std::atan2(cross, dot);
      prev = s;
    };
    dopri5_advance(rhs, pot.node(node), pot.node(node + dir), y, h, ctl,
                   on_step);
    const double norm = std::max(std::abs(y[0]), std::abs(y[1]));
    double factor = 1.0;
    if (norm > kRescaleHigh) factor = kRescaleLow;
    if (norm < kRescaleLow && norm > 0.0) factor = kRescaleHigh;
    if (factor != 1.0) {
      y[0] *= factor;
      y[1] *= factor;
      prev = y;
      if (store)
        for (int k = from; k != node + dir; k += dir) {
          shot.u[k] *= factor;
          shot.du[k] *= factor;
        }
    }
    if (store) {
      shot.u[node + dir] = y[0];
      shot.du[node + dir] = y[1];
    }
  }
  shot.phase = phase;
  shot.end = y;
  return shot;
}

double mismatch_with(const GridPotential& pot, const PieceTable& table,
                     double energy, int m, double ode_tol) {
  const int n = pot.intervals();
  const Shot left = shoot(pot, table, energy, 0, m, {0.0, 1.0}, 0.0, ode_tol,
                          false);
  const Shot right = shoot(pot, table, energy, n, m, {0.0, -1.0},
                           std::numbers::pi, ode_tol, false);
  return left.phase - right.phase;
}

struct Joined {
  RegularSolution solution;
  double defect = 0.0;
};

Joined join_shots(const GridPotential& pot, double energy, double ode_tol) {
  const PieceTable table(pot);
  const int n = pot.intervals();
  const int m = match_node(pot);
  Shot left = shoot(pot, table, energy, 0, m, {0.0, 1.0}, 0.0, ode_tol, true);
  Shot right = shoot(pot, table, energy, n, m, {0.0, -1.0}, std::numbers::pi,
                     ode_tol, true);
  const double ul = left.u[m], dl = left.du[m];
  const double ur = right.u[m], dr = right.du[m];
  const double scale = (ul * ur + dl * dr) / (ur * ur + dr * dr);
  Joined j;
  j.defect = std::abs(ul * dr - dl * ur) /
             (std::hypot(ul, dl) * std::hypot(ur, dr));
  RegularSolution& s = j.solution;
  s.energy = energy;
  s.values.resize(n + 1);
  s.derivatives.resize(n + 1);
  for (int i = 0; i <= m; ++i) {
    s.values[i] = left.u[i];
    s.derivatives[i] = left.du[i];
  }
  for (int i = m + 1; i <= n; ++i) {
    s.values[i] = scale * right.u[i];
    s.derivatives[i] = scale * right.du[i];
  }
  return j;
}

}  // namespace

int match_node(const GridPotential& pot) {
  const auto v = pot.samples();
  const double vmin = *std::min_element(v.begin(), v.end());
  int first = -1, last = -1;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] == vmin) {
      if (first < 0) first = i;
      last = i;
    }
  return (first + last) / 2;
}

double phase_mismatch(const GridPotential& pot, double energy, int match,
                      double ode_tol) {
  if (match < 0 || match > pot.intervals())
    fail(ErrorCode::invalid_argument, "match node out of range");
  const PieceTable table(pot);
  return mismatch_with(pot, table, energy, match, ode_tol);
}

EigenSolveReport eigenvalues(const GridPotential& pot, int count,
                             const EigenOptions& opts) {
  if (count < 1) fail(ErrorCode::invalid_argument, "J must be >= 1");
  if (!(opts.phase_tol > 0.0) || !(opts.ode_tol > 0.0))
    fail(ErrorCode::invalid_argument, "tolerances must be positive");

  const PieceTable table(pot);
  const int m = match_node(pot);
  EigenSolveReport report;
  report.match_point = pot.node(m);

  // Evaluated (E, D(E)) pairs, kept sorted by E; D is increasing in E.
  std::vector<std::pair<double, double>> cache;
  auto evaluate = [&](double e) {
    const double d = mismatch_with(pot, table, e, m, opts.ode_tol);
    const auto it = std::lower_bound(
        cache.begin(), cache.end(), e,
        [](const auto& p, double key) { return p.first < key; });
    cache.insert(it, {e, d});
    return d;
  };

  const auto v = pot.samples();
  const auto [vmin_it, vmax_it] = std::minmax_element(v.begin(), v.end());
  const double spread = std::max(1.0, *vmax_it - *vmin_it);
  double lo = *vmin_it - 1e-3 * spread - 1.0;
  for (int k = 0; evaluate(lo) >= 0.0; ++k) {
    if (k > 60) fail(ErrorCode::bracket_not_found, "no lower bracket");
    lo -= spread * std::ldexp(1.0, k);
  }
  const double top = (count - 1) * std::numbers::pi;
  double width = 1.0;
  double hi = lo + width;
  while (evaluate(hi) <= top) {
    width *= 2.0;
    if (width > opts.search_max)
      fail(ErrorCode::bracket_not_found,
           "eigenvalue " + std::to_string(count) +
               " not bracketed below E = " + std::to_string(lo + width / 2));
    hi = lo + width;
  }

  for (int j = 1; j <= count; ++j) {
    const double target = (j - 1) * std::numbers::pi;
    double a = lo, da = -1.0, b = hi, db = 1.0;
    for (const auto& [e, d] : cache) {
      if (d - target < 0.0) {
        a = e;
        da = d - target;
      } else if (e > a) {
        b = e;
        db = d - target;
        break;
      }
    }
    int iterations = 0;
    double best_e = std::abs(da) < std::abs(db) ? a : b;
    double best_r = std::min(std::abs(da), std::abs(db));
    int side = 0;
    while (best_r > opts.phase_tol) {
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max({1.0, std::abs(a), std::abs(b)}))
        break;
      if (++iterations > opts.max_iterations)
        fail(ErrorCode::no_convergence,
             "eigenvalue " + std::to_string(j) + " did not converge");
      // Bisection while the bracket is wide, then Illinois-modified secant.
      const bool wide = b - a > 1e-2 * (1.0 + std::abs(a));
      double e = wide ? 0.5 * (a + b) : (a * db - b * da) / (db - da);
      if (!(e > a && e < b)) e = 0.5 * (a + b);
      const double r = evaluate(e) - target;
      if (std::abs(r) < best_r) {
        best_r = std::abs(r);
        best_e = e;
      }
      if (r == 0.0) break;
      if (r < 0.0) {
        a = e;
        da = r;
        if (side == -1 && !wide) db *= 0.5;
        side = -1;
      } else {
        b = e;
        db = r;
        if (side == 1 && !wide) da *= 0.5;
        side = 1;
      }
    }
    if (!report.eigenvalues.empty() && !(best_e > report.eigenvalues.back()))
      fail(ErrorCode::no_convergence, "eigenvalues not strictly increasing");
    report.eigenvalues.push_back(best_e);
    report.residuals.push_back(best_r);
    report.iterations.push_back(iterations);
  }
  return report;
}

RegularSolution regular_solution(const GridPotential& pot, double energy,
                                 double ode_tol) {
  if (!std::isfinite(energy))
    fail(ErrorCode::invalid_argument, "energy must be finite");
  const PieceTable table(pot);
  const int n = pot.intervals();
  Shot shot;
  try {
    shot = shoot(pot, table, energy, 0, n, {0.0, 1.0}, 0.0, ode_tol, true);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::overflow)
      fail(ErrorCode::overflow,
           "regular solution overflowed; use the eigenfunction (two-sided) "
           "integration for energies far below the potential");
    throw;
  }
  // `shoot` rescales silently; an unscaled regular solution that needed
  // rescaling has left the representable range.
  if (shot.u[0] != 0.0 || shot.du[0] != 1.0)
    fail(ErrorCode::overflow,
         "regular solution overflowed; use the eigenfunction (two-sided) "
         "integration for energies far below the potential");
  RegularSolution s;
  s.energy = energy;
  s.values = std::move(shot.u);
  s.derivatives = std::move(shot.du);
  return s;
}

RegularSolution eigenfunction(const GridPotential& pot, double energy,
                              double ode_tol) {
  return join_shots(pot, energy, ode_tol).solution;
}

double join_defect(const GridPotential& pot, double energy, double ode_tol) {
  return join_shots(pot, energy, ode_tol).defect;
}

std::vector<double> norming_constants(const GridPotential& pot,
                                      const EigenSolveReport& report,
                                      double ode_tol) {
  std::vector<double> weights;
  weights.reserve(report.eigenvalues.size());
  std::vector<double> sq(pot.intervals() + 1);
  for (double e : report.eigenvalues) {
    const Joined j = join_shots(pot, e, ode_tol);
    if (!(j.defect < 1e-6))
      fail(ErrorCode::not_eigenvalue,
           "E = " + std::to_string(e) + " is not an eigenvalue (join defect " +
               std::to_string(j.defect) + ")");
    for (std::size_t i = 0; i < sq.size(); ++i)
      sq[i] = j.solution.values[i] * j.solution.values[i];
    const double norm2 = simpson(sq, pot.spacing());
    weights.push_back(1.0 / norm2);
  }
  return weights;
}

double tail_ratio(const GridPotential& pot, const RegularSolution& phi) {
  double peak = 0.0, tail = 0.0;
  const double cut = 0.9 * pot.length();
  for (int i = 0; i <= pot.intervals(); ++i) {
    const double a = std::abs(phi.values[i]);
    peak = std::max(peak, a);
    if (pot.node(i) >= cut) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

SpectralMeasure spectral_measure(const GridPotential& pot, int count,
                                 const ForwardOptions& opts,
                                 EigenSolveReport* report_out) {
  const EigenSolveReport report = eigenvalues(pot, count, opts.eigen);
  if (report_out) *report_out = report;
  std::vector<double> weights =
      norming_constants(pot, report, opts.eigen.ode_tol);
  const RegularSolution top =
      eigenfunction(pot, report.eigenvalues.back(), opts.eigen.ode_tol);
  const double tail = tail_ratio(pot, top);
  if (opts.check_truncation && !(tail < opts.truncation_threshold))
    fail(ErrorCode::truncation,
         "eigenfunction " + std::to_string(count) +
             " has not decayed before x = L (tail ratio " + short_number(tail) +
             "); enlarge L or lower J");
  Provenance prov;
  prov.source = pot.label();
  prov.length = pot.length();
  prov.intervals = pot.intervals();
  prov.count = count;
  prov.eigen_tol = opts.eigen.phase_tol;
  prov.quad_tol = opts.eigen.ode_tol;
  prov.tail_ratio = tail;
  return SpectralMeasure(report.eigenvalues, std::move(weights),
                         std::move(prov));
}

std::complex<double> upper_sqrt(std::complex<double> z) {
  std::complex<double> r = std::sqrt(z);
  if (r.imag() < 0.0) r = -r;
  return r;
}

std::complex<double> weyl_m_ode(const GridPotential& pot,
                                std::complex<double> z, double ode_tol) {
  if (std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z.real())))
    fail(ErrorCode::conditioning,
         "z is too close to the real axis for the Riccati route");
  using CVec = std::array<std::complex<double>, 1>;
  const PieceTable table(pot);
  const int n = pot.intervals();
  CVec w{std::complex<double>(0.0, 1.0) *
         upper_sqrt(z - pot.samples()[n])};
  StepControl ctl;
  ctl.tol_per_length = ode_tol;
  ctl.scale_floor = 1.0;
  ctl.max_step = pot.spacing();
  double h = 0.0;
  for (int node = n; node > 0; --node) {
    const CubicPiece& piece = table.pieces[node - 1];
    auto rhs = [&](double x, const CVec& s) -> CVec {
      return {piece(x) - z - s[0] * s[0]};
    };
    dopri5_advance(rhs, pot.node(node), pot.node(node - 1), w, h, ctl,
                   [](double, const CVec&) {});
  }
  return w[0];
}

std::complex<double> m_from_measure(const SpectralMeasure& measure,
                                    const MFunctionFit& fit,
                                    std::complex<double> z) {
  std::complex<double> sum = fit.c;
  const auto& e = measure.eigenvalues();
  const auto& a = measure.weights();
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (std::abs(z - e[j]) <= 1e-14 * (1.0 + std::abs(e[j])))
      fail(ErrorCode::pole, "z coincides with eigenvalue " + std::to_string(j + 1));
    // 1/(E - z) - E/(1 + E^2), combined to avoid cancellation at large E
    sum += a[j] * (1.0 + e[j] * z) / ((e[j] - z) * (1.0 + e[j] * e[j]));
  }
  if (fit.tail) sum += reference_tail(fit.tail_start, fit.tail_shift, z);
  return sum;
}

std::complex<double> reference_tail(double start, double shift,
                                    std::complex<double> z) {
  if (!(start > shift))
    fail(ErrorCode::invalid_argument, "tail must start above its shift");
  // lambda = shift + (k0 / s)^2, s in (0, 1]
  const double k0 = std::sqrt(start - shift);
  auto integrand = [&](double s) {
    const double k = k0 / s;
    const double lam = shift + k * k;
    const std::complex<double> f =
        (1.0 + lam * z) / ((lam - z) * (1.0 + lam * lam));
    return f * (2.0 / std::numbers::pi) * k * k * (k0 / (s * s));
  };
  const auto re = gauss_kronrod([&](double s) { return integrand(s).real(); },
                                0.0, 1.0, 1e-13);
  const auto im = gauss_kronrod([&](double s) { return integrand(s).imag(); },
                                0.0, 1.0, 1e-13);
  return {re.value, im.value};
}

MFunctionFit fit_m_constant(const GridPotential& pot,
                            const SpectralMeasure& measure,
                            std::complex<double> anchor, bool with_tail) {
  MFunctionFit fit;
  fit.anchor = anchor;
  const auto& e = measure.eigenvalues();
  if (with_tail && !e.empty()) {
    const double shift = pot.samples()[0];
    const double gap = e.size() > 1 ? e.back() - e[e.size() - 2]
                                    : std::max(1.0, e.back() - shift);
    fit.tail = true;
    fit.tail_shift = shift;
    fit.tail_start = std::max(e.back() + 0.5 * gap, shift + 1e-3);
  }
  const std::complex<double> ode = weyl_m_ode(pot, anchor);
  const std::complex<double> partial = m_from_measure(measure, fit, anchor);
  fit.c = (ode - partial).real();
  fit.anchor_residual = std::abs((ode - partial).imag());
  return fit;
}

double free_measure_density(double energy) {
  return energy >= 0.0 ? std::sqrt(energy) / std::numbers::pi : 0.0;
}

}  // namespace isospec
