#include "isospec/isospec.h"

#include <new>
#include <optional>
#include <string>

#include "isospec/a_transform.hpp"
#include "isospec/error.hpp"
#include "isospec/forward.hpp"
#include "isospec/io.hpp"
#include "isospec/measure.hpp"
#include "isospec/reconstruct.hpp"
#include "isospec/verify.hpp"

using namespace isospec;

struct isospec_potential {
  GridPotential pot;
};

struct isospec_measure {
  SpectralMeasure measure;
  std::optional<EigenSolveReport> report;
};

struct isospec_path {
  IsospectralPath path;
};

struct isospec_afunc {
  AFunction a;
};

struct isospec_reconstruction {
  ReconstructionResult result;
  isospec_potential pot;
  ReconstructionOptions opts;
};

struct isospec_report {
  IsospectralityReport report;
};

namespace {

thread_local std::string last_error;

template <class F>
isospec_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ISOSPEC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<isospec_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ISOSPEC_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ISOSPEC_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::invalid_argument, what);
}

ForwardOptions forward_options(const isospec_forward_options* o) {
  ForwardOptions f;
  if (o) {
    f.eigen.phase_tol = o->phase_tol;
    f.eigen.ode_tol = o->ode_tol;
    f.check_truncation = o->check_truncation != 0;
    f.truncation_threshold = o->truncation_threshold;
  }
  return f;
}

ReconstructionOptions reconstruct_options(const isospec_reconstruct_options* o) {
  ReconstructionOptions r;
  if (o) {
    r.condition_warn = o->condition_warn;
    r.ode_tol = o->ode_tol;
  }
  return r;
}

isospec_record to_record(const IsospectralRecord& r) {
  return {r.t, r.eig_dev, r.weight_dev, r.det_positive ? 1 : 0, r.pass ? 1 : 0};
}

VerifyTolerances verify_tolerances(const isospec_verify_tolerances* tol) {
  VerifyTolerances v;
  if (tol) {
    v.eigen = tol->eigen;
    v.weight = tol->weight;
    v.radius_fraction = tol->radius_fraction;
    v.margin = tol->margin;
    v.solver.phase_tol = tol->phase_tol;
    v.solver.ode_tol = tol->ode_tol;
  }
  return v;
}

AlphaGrid alpha_grid(double first, double last, int count) {
  return AlphaGrid{first, last, count};
}

}  // namespace

extern "C" {

const char* isospec_version(void) { return "1.0.0"; }

const char* isospec_status_name(isospec_status status) {
  if (status == ISOSPEC_OK) return "ok";
  if (status == ISOSPEC_INTERNAL) return "internal";
  return error_name(static_cast<ErrorCode>(status));
}

const char* isospec_last_error(void) { return last_error.c_str(); }

isospec_status isospec_potential_create(double length, int intervals,
                                        const double* samples, const char* label,
                                        isospec_potential** out) {
  return guarded([&] {
    require(samples && out, "null argument");
    require(intervals >= 2, "need at least two intervals");
    std::vector<double> v(samples, samples + intervals + 1);
    *out = new isospec_potential{
        GridPotential(length, intervals, std::move(v), label ? label : "")};
  });
}

isospec_status isospec_potential_builtin(const char* name, double length,
                                         int intervals, isospec_potential** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new isospec_potential{builtin_potential(name, length, intervals)};
  });
}

isospec_status isospec_potential_read(const char* path, isospec_potential** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new isospec_potential{io::potential_from_json(io::read_json(path))};
  });
}

isospec_status isospec_potential_write(const isospec_potential* pot,
                                       const char* path) {
  return guarded([&] {
    require(pot && path, "null argument");
    io::write_json(path, io::to_json(pot->pot));
  });
}

void isospec_potential_free(isospec_potential* pot) { delete pot; }

double isospec_potential_length(const isospec_potential* pot) {
  return pot ? pot->pot.length() : 0.0;
}

int isospec_potential_intervals(const isospec_potential* pot) {
  return pot ? pot->pot.intervals() : 0;
}

const double* isospec_potential_samples(const isospec_potential* pot) {
  return pot ? pot->pot.samples().data() : nullptr;
}

const char* isospec_potential_label(const isospec_potential* pot) {
  return pot ? pot->pot.label().c_str() : "";
}

int isospec_potential_equal(const isospec_potential* a,
                            const isospec_potential* b) {
  return a && b && a->pot == b->pot;
}

void isospec_forward_options_default(isospec_forward_options* opts) {
  if (!opts) return;
  const ForwardOptions d;
  opts->phase_tol = d.eigen.phase_tol;
  opts->ode_tol = d.eigen.ode_tol;
  opts->check_truncation = d.check_truncation ? 1 : 0;
  opts->truncation_threshold = d.truncation_threshold;
}

isospec_status isospec_eigenvalues(const isospec_potential* pot, int count,
                                   const isospec_forward_options* opts,
                                   double* out) {
  return guarded([&] {
    require(pot && out, "null argument");
    const EigenSolveReport r =
        eigenvalues(pot->pot, count, forward_options(opts).eigen);
    std::copy(r.eigenvalues.begin(), r.eigenvalues.end(), out);
  });
}

isospec_status isospec_regular_solution(const isospec_potential* pot,
                                        double energy, double ode_tol,
                                        double* values, double* derivatives) {
  return guarded([&] {
    require(pot && values, "null argument");
    const RegularSolution s = regular_solution(pot->pot, energy, ode_tol);
    std::copy(s.values.begin(), s.values.end(), values);
    if (derivatives)
      std::copy(s.derivatives.begin(), s.derivatives.end(), derivatives);
  });
}

isospec_status isospec_spectral_measure(const isospec_potential* pot, int count,
                                        const isospec_forward_options* opts,
                                        isospec_measure** out) {
  return guarded([&] {
    require(pot && out, "null argument");
    EigenSolveReport report;
    SpectralMeasure m =
        spectral_measure(pot->pot, count, forward_options(opts), &report);
    *out = new isospec_measure{std::move(m), std::move(report)};
  });
}

isospec_status isospec_measure_write_eigen_report(const isospec_measure* m,
                                                  const char* path) {
  return guarded([&] {
    require(m && path, "null argument");
    require(m->report.has_value(), "measure was not produced by a solve");
    io::write_json(path, io::to_json(*m->report));
  });
}

isospec_status isospec_weyl_m_ode(const isospec_potential* pot, double re,
                                  double im, double ode_tol, double out[2]) {
  return guarded([&] {
    require(pot && out, "null argument");
    const auto m = weyl_m_ode(pot->pot, {re, im}, ode_tol);
    out[0] = m.real();
    out[1] = m.imag();
  });
}

isospec_status isospec_fit_m_constant(const isospec_potential* pot,
                                      const isospec_measure* m, double anchor_re,
                                      double anchor_im, int with_tail,
                                      isospec_m_fit* out) {
  return guarded([&] {
    require(pot && m && out, "null argument");
    const MFunctionFit f = fit_m_constant(pot->pot, m->measure,
                                          {anchor_re, anchor_im}, with_tail != 0);
    *out = {f.c,          f.anchor.real(), f.anchor.imag(), f.tail ? 1 : 0,
            f.tail_start, f.tail_shift,    f.anchor_residual};
  });
}

isospec_status isospec_m_from_measure(const isospec_measure* m,
                                      const isospec_m_fit* fit, double re,
                                      double im, double out[2]) {
  return guarded([&] {
    require(m && out, "null argument");
    MFunctionFit f;
    if (fit) {
      f.c = fit->c;
      f.anchor = {fit->anchor_re, fit->anchor_im};
      f.tail = fit->tail != 0;
      f.tail_start = fit->tail_start;
      f.tail_shift = fit->tail_shift;
      f.anchor_residual = fit->anchor_residual;
    }
    const auto v = m_from_measure(m->measure, f, {re, im});
    out[0] = v.real();
    out[1] = v.imag();
  });
}

double isospec_free_measure_density(double energy) {
  return free_measure_density(energy);
}

isospec_status isospec_measure_create(size_t count, const double* eigenvalues,
                                      const double* weights, const char* source,
                                      isospec_measure** out) {
  return guarded([&] {
    require(count >= 1, "a measure needs at least one eigenvalue");
    require(out && eigenvalues && weights, "null argument");
    Provenance p;
    p.source = source ? source : "";
    p.count = static_cast<int>(count);
    *out = new isospec_measure{
        SpectralMeasure(std::vector<double>(eigenvalues, eigenvalues + count),
                        std::vector<double>(weights, weights + count), p),
        std::nullopt};
  });
}

isospec_status isospec_measure_read(const char* path, isospec_measure** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new isospec_measure{io::measure_from_json(io::read_json(path)),
                               std::nullopt};
  });
}

isospec_status isospec_measure_write(const isospec_measure* m, const char* path) {
  return guarded([&] {
    require(m && path, "null argument");
    io::write_json(path, io::to_json(m->measure));
  });
}

void isospec_measure_free(isospec_measure* m) { delete m; }

size_t isospec_measure_size(const isospec_measure* m) {
  return m ? m->measure.size() : 0;
}

const double* isospec_measure_eigenvalues(const isospec_measure* m) {
  return m ? m->measure.eigenvalues().data() : nullptr;
}

const double* isospec_measure_weights(const isospec_measure* m) {
  return m ? m->measure.weights().data() : nullptr;
}

const char* isospec_measure_source(const isospec_measure* m) {
  return m ? m->measure.provenance().source.c_str() : "";
}

double isospec_measure_tail_ratio(const isospec_measure* m) {
  return m ? m->measure.provenance().tail_ratio : 0.0;
}

isospec_status isospec_measure_perturb(const isospec_measure* m, size_t count,
                                       const int* indices, const double* deltas,
                                       isospec_measure** out) {
  return guarded([&] {
    require(m && out && (count == 0 || (indices && deltas)), "null argument");
    std::map<int, double> d;
    for (size_t i = 0; i < count; ++i) d[indices[i]] += deltas[i];
    *out = new isospec_measure{perturb_weights(m->measure, d), std::nullopt};
  });
}

isospec_status isospec_path_create(const isospec_measure* base,
                                   const isospec_measure* target, double tol,
                                   isospec_path** out) {
  return guarded([&] {
    require(base && target && out, "null argument");
    *out = new isospec_path{make_path(base->measure, target->measure, tol)};
  });
}

isospec_status isospec_path_read(const char* path, isospec_path** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new isospec_path{io::path_from_json(io::read_json(path))};
  });
}

isospec_status isospec_path_write(const isospec_path* p, const char* path) {
  return guarded([&] {
    require(p && path, "null argument");
    io::write_json(path, io::to_json(p->path));
  });
}

void isospec_path_free(isospec_path* p) { delete p; }

isospec_status isospec_path_measure_at(const isospec_path* p, double t,
                                       isospec_measure** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = new isospec_measure{measure_at(p->path, t), std::nullopt};
  });
}

isospec_status isospec_path_base(const isospec_path* p, isospec_measure** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = new isospec_measure{p->path.base(), std::nullopt};
  });
}

isospec_status isospec_path_target(const isospec_path* p, isospec_measure** out) {
  return guarded([&] {
    require(p && out, "null argument");
    *out = new isospec_measure{p->path.target(), std::nullopt};
  });
}

size_t isospec_path_support(const isospec_path* p, int* indices,
                            size_t capacity) {
  if (!p) return 0;
  const std::vector<int> s = p->path.support();
  for (size_t i = 0; i < s.size() && i < capacity && indices; ++i)
    indices[i] = s[i];
  return s.size();
}

double isospec_a_kernel(double lambda, double alpha) {
  return a_kernel(lambda, alpha);
}

isospec_status isospec_delta_a(const isospec_measure* a, const isospec_measure* b,
                               double alpha_first, double alpha_last, int count,
                               isospec_afunc** out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = new isospec_afunc{delta_a(a->measure, b->measure,
                                     alpha_grid(alpha_first, alpha_last, count))};
  });
}

isospec_status isospec_a_regularized(const isospec_measure* m,
                                     double alpha_first, double alpha_last,
                                     int count, isospec_afunc** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = new isospec_afunc{
        a_regularized(m->measure, alpha_grid(alpha_first, alpha_last, count))};
  });
}

isospec_status isospec_afunc_interpolate(const isospec_afunc* a0,
                                         const isospec_afunc* a1, double t,
                                         isospec_afunc** out) {
  return guarded([&] {
    require(a0 && a1 && out, "null argument");
    *out = new isospec_afunc{interpolate_a(a0->a, a1->a, t)};
  });
}

void isospec_afunc_free(isospec_afunc* a) { delete a; }

int isospec_afunc_size(const isospec_afunc* a) { return a ? a->a.grid.count : 0; }

double isospec_afunc_alpha(const isospec_afunc* a, int i) {
  return a ? a->a.grid.at(i) : 0.0;
}

const double* isospec_afunc_values(const isospec_afunc* a) {
  return a ? a->a.values.data() : nullptr;
}

const double* isospec_afunc_residuals(const isospec_afunc* a) {
  return a ? a->a.residuals.data() : nullptr;
}

isospec_akind isospec_afunc_kind(const isospec_afunc* a) {
  return a && a->a.kind == AKind::regularized ? ISOSPEC_A_REGULARIZED
                                              : ISOSPEC_A_DIFFERENCE;
}

isospec_status isospec_afunc_write_csv(const isospec_afunc* a, const char* path) {
  return guarded([&] {
    require(a && path, "null argument");
    io::write_text_atomic(path, io::a_function_csv(a->a));
  });
}

void isospec_reconstruct_options_default(isospec_reconstruct_options* opts) {
  if (!opts) return;
  const ReconstructionOptions d;
  opts->condition_warn = d.condition_warn;
  opts->ode_tol = d.ode_tol;
}

isospec_status isospec_reconstruct_at(const isospec_path* p,
                                      const isospec_potential* pot0, double t,
                                      const isospec_reconstruct_options* opts,
                                      isospec_reconstruction** out) {
  return guarded([&] {
    require(p && pot0 && out, "null argument");
    const ReconstructionOptions o = reconstruct_options(opts);
    ReconstructionResult r = reconstruct_at(p->path, pot0->pot, t, o);
    GridPotential v = r.potential;
    *out = new isospec_reconstruction{std::move(r), {std::move(v)}, o};
  });
}

void isospec_reconstruction_free(isospec_reconstruction* r) { delete r; }

double isospec_reconstruction_t(const isospec_reconstruction* r) {
  return r ? r->result.t : 0.0;
}

const isospec_potential* isospec_reconstruction_potential(
    const isospec_reconstruction* r) {
  return r ? &r->pot : nullptr;
}

const double* isospec_reconstruction_det_track(const isospec_reconstruction* r) {
  return r ? r->result.det_track.data() : nullptr;
}

double isospec_reconstruction_min_det(const isospec_reconstruction* r) {
  return r ? r->result.min_det : 0.0;
}

double isospec_reconstruction_max_condition(const isospec_reconstruction* r) {
  return r ? r->result.max_condition : 0.0;
}

size_t isospec_reconstruction_warning_count(const isospec_reconstruction* r) {
  return r ? r->result.warnings.size() : 0;
}

const char* isospec_reconstruction_warning(const isospec_reconstruction* r,
                                           size_t i) {
  if (!r || i >= r->result.warnings.size()) return "";
  return r->result.warnings[i].c_str();
}

isospec_status isospec_reconstruction_write_csv(const isospec_reconstruction* r,
                                                const char* path) {
  return guarded([&] {
    require(r && path, "null argument");
    io::write_text_atomic(path, io::reconstruction_csv(r->result));
  });
}

isospec_status isospec_reconstruction_write_sidecar(
    const isospec_reconstruction* r, const char* path) {
  return guarded([&] {
    require(r && path, "null argument");
    io::write_json(path, io::sidecar_json(r->result, r->opts));
  });
}

isospec_status isospec_path_smoothness(const isospec_path* p,
                                       const isospec_potential* pot0,
                                       const isospec_reconstruct_options* opts,
                                       double* max_inner) {
  return guarded([&] {
    require(p && pot0 && max_inner, "null argument");
    const ReconstructionOptions o = reconstruct_options(opts);
    check_path_matches(p->path, pot0->pot);
    const OverlapTable table =
        overlap_table(pot0->pot, p->path.base(), p->path.support(), o.ode_tol);
    *max_inner = smoothness_in_t(p->path, pot0->pot, table, 16, 50, o).max_inner;
  });
}

isospec_status isospec_rank_one_oracle(const isospec_potential* pot0,
                                       double energy, double delta_c,
                                       isospec_potential** out) {
  return guarded([&] {
    require(pot0 && out, "null argument");
    const RegularSolution phi = eigenfunction(pot0->pot, energy);
    *out = new isospec_potential{rank_one_oracle(pot0->pot, phi, delta_c)};
  });
}

void isospec_verify_tolerances_default(isospec_verify_tolerances* tol) {
  if (!tol) return;
  const VerifyTolerances d;
  *tol = {d.eigen, d.weight, d.radius_fraction, d.margin, d.solver.phase_tol,
          d.solver.ode_tol};
}

isospec_status isospec_check_isospectral(const isospec_potential* pot,
                                         const double* target,
                                         size_t target_count, int count,
                                         double tol, isospec_record* out) {
  return guarded([&] {
    require(pot && target && out, "null argument");
    *out = to_record(check_isospectral(
        pot->pot, std::span<const double>(target, target_count), count, tol));
  });
}

isospec_status isospec_spectrum_report(const isospec_potential* pot,
                                       const double* target,
                                       size_t target_count, int count,
                                       const isospec_verify_tolerances* tol,
                                       isospec_report** out) {
  return guarded([&] {
    require(pot && target && out, "null argument");
    const VerifyTolerances v = verify_tolerances(tol);
    IsospectralityReport r;
    r.tolerances = v;
    r.compared = count;
    r.records.push_back(check_isospectral(
        pot->pot, std::span<const double>(target, target_count), count, v.eigen,
        v.solver));
    r.pass = r.records.front().pass;
    *out = new isospec_report{std::move(r)};
  });
}

isospec_status isospec_path_report(const isospec_path* p,
                                   const isospec_potential* pot0,
                                   const double* ts, size_t t_count,
                                   const isospec_verify_tolerances* tol,
                                   isospec_report** out) {
  return guarded([&] {
    require(p && pot0 && out && (t_count == 0 || ts), "null argument");
    const VerifyTolerances v = verify_tolerances(tol);
    *out = new isospec_report{
        path_report(p->path, pot0->pot, std::span<const double>(ts, t_count), v)};
  });
}

void isospec_report_free(isospec_report* r) { delete r; }

int isospec_report_pass(const isospec_report* r) {
  return r && r->report.pass ? 1 : 0;
}

size_t isospec_report_record_count(const isospec_report* r) {
  return r ? r->report.records.size() : 0;
}

isospec_status isospec_report_record(const isospec_report* r, size_t i,
                                     isospec_record* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(i < r->report.records.size(), "record index out of range");
    *out = to_record(r->report.records[i]);
  });
}

size_t isospec_report_l1_count(const isospec_report* r) {
  return r ? r->report.l1_increments.size() : 0;
}

const double* isospec_report_l1_increments(const isospec_report* r) {
  return r ? r->report.l1_increments.data() : nullptr;
}

isospec_status isospec_report_write(const isospec_report* r, const char* path) {
  return guarded([&] {
    require(r && path, "null argument");
    io::write_json(path, io::to_json(r->report));
  });
}

}  // extern "C"
