#ifndef ISOSPEC_ISOSPEC_H
#define ISOSPEC_ISOSPEC_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ISOSPEC_BUILDING_LIBRARY)
#    define ISOSPEC_API __declspec(dllexport)
#  else
#    define ISOSPEC_API __declspec(dllimport)
#  endif
#else
#  define ISOSPEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure a message is available
   from isospec_last_error() on the calling thread. */
typedef enum isospec_status {
  ISOSPEC_OK = 0,
  ISOSPEC_INVALID_ARGUMENT = 1,
  ISOSPEC_IO = 2,
  ISOSPEC_PARSE = 3,
  ISOSPEC_BRACKET_NOT_FOUND = 4,
  ISOSPEC_NO_CONVERGENCE = 5,
  ISOSPEC_OVERFLOW = 6,
  ISOSPEC_NOT_EIGENVALUE = 7,
  ISOSPEC_SPECTRUM_MISMATCH = 8,
  ISOSPEC_LENGTH_MISMATCH = 9,
  ISOSPEC_NONPOSITIVE_WEIGHT = 10,
  ISOSPEC_POLE = 11,
  ISOSPEC_CONDITIONING = 12,
  ISOSPEC_EXTRAPOLATION_DIVERGED = 13,
  ISOSPEC_GRID_MISMATCH = 14,
  ISOSPEC_NONPOSITIVE_DETERMINANT = 15,
  ISOSPEC_TRUNCATION = 16,
  ISOSPEC_PROVENANCE_MISMATCH = 17,
  ISOSPEC_INTERNAL = 99
} isospec_status;

typedef struct isospec_potential isospec_potential;
typedef struct isospec_measure isospec_measure;
typedef struct isospec_path isospec_path;
typedef struct isospec_afunc isospec_afunc;
typedef struct isospec_reconstruction isospec_reconstruction;
typedef struct isospec_report isospec_report;

ISOSPEC_API const char* isospec_version(void);
ISOSPEC_API const char* isospec_status_name(isospec_status status);
ISOSPEC_API const char* isospec_last_error(void);

/* Potentials: samples at x_i = i L / n, i = 0..n. */
ISOSPEC_API isospec_status isospec_potential_create(double length, int intervals,
                                                    const double* samples,
                                                    const char* label,
                                                    isospec_potential** out);
ISOSPEC_API isospec_status isospec_potential_builtin(const char* name,
                                                     double length, int intervals,
                                                     isospec_potential** out);
ISOSPEC_API isospec_status isospec_potential_read(const char* path,
                                                  isospec_potential** out);
ISOSPEC_API isospec_status isospec_potential_write(const isospec_potential* pot,
                                                   const char* path);
ISOSPEC_API void isospec_potential_free(isospec_potential* pot);
ISOSPEC_API double isospec_potential_length(const isospec_potential* pot);
ISOSPEC_API int isospec_potential_intervals(const isospec_potential* pot);
ISOSPEC_API const double* isospec_potential_samples(const isospec_potential* pot);
ISOSPEC_API const char* isospec_potential_label(const isospec_potential* pot);
ISOSPEC_API int isospec_potential_equal(const isospec_potential* a,
                                        const isospec_potential* b);

/* Forward problem. */
typedef struct isospec_forward_options {
  double phase_tol;
  double ode_tol;
  int check_truncation;
  double truncation_threshold;
} isospec_forward_options;

ISOSPEC_API void isospec_forward_options_default(isospec_forward_options* opts);

ISOSPEC_API isospec_status isospec_eigenvalues(const isospec_potential* pot,
                                               int count,
                                               const isospec_forward_options* opts,
                                               double* eigenvalues);
/* values and derivatives receive n + 1 entries each; derivatives may be NULL. */
ISOSPEC_API isospec_status isospec_regular_solution(const isospec_potential* pot,
                                                    double energy, double ode_tol,
                                                    double* values,
                                                    double* derivatives);
ISOSPEC_API isospec_status isospec_spectral_measure(const isospec_potential* pot,
                                                    int count,
                                                    const isospec_forward_options* opts,
                                                    isospec_measure** out);
/* JSON eigen report (eigenvalues, residuals, iterations) for the last
   isospec_spectral_measure call that produced this measure. */
ISOSPEC_API isospec_status isospec_measure_write_eigen_report(
    const isospec_measure* m, const char* path);

ISOSPEC_API isospec_status isospec_weyl_m_ode(const isospec_potential* pot,
                                              double re, double im,
                                              double ode_tol, double out[2]);

typedef struct isospec_m_fit {
  double c;
  double anchor_re;
  double anchor_im;
  int tail;
  double tail_start;
  double tail_shift;
  double anchor_residual;
} isospec_m_fit;

ISOSPEC_API isospec_status isospec_fit_m_constant(const isospec_potential* pot,
                                                  const isospec_measure* m,
                                                  double anchor_re,
                                                  double anchor_im, int with_tail,
                                                  isospec_m_fit* out);
ISOSPEC_API isospec_status isospec_m_from_measure(const isospec_measure* m,
                                                  const isospec_m_fit* fit,
                                                  double re, double im,
                                                  double out[2]);
ISOSPEC_API double isospec_free_measure_density(double energy);

/* Spectral measures. Indices are 0-based in this API. */
ISOSPEC_API isospec_status isospec_measure_create(size_t count,
                                                  const double* eigenvalues,
                                                  const double* weights,
                                                  const char* source,
                                                  isospec_measure** out);
ISOSPEC_API isospec_status isospec_measure_read(const char* path,
                                                isospec_measure** out);
ISOSPEC_API isospec_status isospec_measure_write(const isospec_measure* m,
                                                 const char* path);
ISOSPEC_API void isospec_measure_free(isospec_measure* m);
ISOSPEC_API size_t isospec_measure_size(const isospec_measure* m);
ISOSPEC_API const double* isospec_measure_eigenvalues(const isospec_measure* m);
ISOSPEC_API const double* isospec_measure_weights(const isospec_measure* m);
ISOSPEC_API const char* isospec_measure_source(const isospec_measure* m);
ISOSPEC_API double isospec_measure_tail_ratio(const isospec_measure* m);
ISOSPEC_API isospec_status isospec_measure_perturb(const isospec_measure* m,
                                                   size_t count,
                                                   const int* indices,
                                                   const double* deltas,
                                                   isospec_measure** out);

/* Isospectral paths. */
ISOSPEC_API isospec_status isospec_path_create(const isospec_measure* base,
                                               const isospec_measure* target,
                                               double tol, isospec_path** out);
ISOSPEC_API isospec_status isospec_path_read(const char* path,
                                             isospec_path** out);
ISOSPEC_API isospec_status isospec_path_write(const isospec_path* p,
                                              const char* path);
ISOSPEC_API void isospec_path_free(isospec_path* p);
ISOSPEC_API isospec_status isospec_path_measure_at(const isospec_path* p,
                                                   double t,
                                                   isospec_measure** out);
ISOSPEC_API isospec_status isospec_path_base(const isospec_path* p,
                                             isospec_measure** out);
ISOSPEC_API isospec_status isospec_path_target(const isospec_path* p,
                                               isospec_measure** out);
/* Writes up to `capacity` indices and returns the support size. */
ISOSPEC_API size_t isospec_path_support(const isospec_path* p, int* indices,
                                        size_t capacity);

/* A-function. */
typedef enum isospec_akind {
  ISOSPEC_A_DIFFERENCE = 0,
  ISOSPEC_A_REGULARIZED = 1
} isospec_akind;

ISOSPEC_API double isospec_a_kernel(double lambda, double alpha);
ISOSPEC_API isospec_status isospec_delta_a(const isospec_measure* a,
                                           const isospec_measure* b,
                                           double alpha_first, double alpha_last,
                                           int count, isospec_afunc** out);
ISOSPEC_API isospec_status isospec_a_regularized(const isospec_measure* m,
                                                 double alpha_first,
                                                 double alpha_last, int count,
                                                 isospec_afunc** out);
ISOSPEC_API isospec_status isospec_afunc_interpolate(const isospec_afunc* a0,
                                                     const isospec_afunc* a1,
                                                     double t,
                                                     isospec_afunc** out);
ISOSPEC_API void isospec_afunc_free(isospec_afunc* a);
ISOSPEC_API int isospec_afunc_size(const isospec_afunc* a);
ISOSPEC_API double isospec_afunc_alpha(const isospec_afunc* a, int i);
ISOSPEC_API const double* isospec_afunc_values(const isospec_afunc* a);
ISOSPEC_API const double* isospec_afunc_residuals(const isospec_afunc* a);
ISOSPEC_API isospec_akind isospec_afunc_kind(const isospec_afunc* a);
ISOSPEC_API isospec_status isospec_afunc_write_csv(const isospec_afunc* a,
                                                   const char* path);

/* Gelfand-Levitan reconstruction. */
typedef struct isospec_reconstruct_options {
  double condition_warn;
  double ode_tol;
} isospec_reconstruct_options;

ISOSPEC_API void isospec_reconstruct_options_default(
    isospec_reconstruct_options* opts);
ISOSPEC_API isospec_status isospec_reconstruct_at(
    const isospec_path* p, const isospec_potential* pot0, double t,
    const isospec_reconstruct_options* opts, isospec_reconstruction** out);
ISOSPEC_API void isospec_reconstruction_free(isospec_reconstruction* r);
ISOSPEC_API double isospec_reconstruction_t(const isospec_reconstruction* r);
ISOSPEC_API const isospec_potential* isospec_reconstruction_potential(
    const isospec_reconstruction* r);
ISOSPEC_API const double* isospec_reconstruction_det_track(
    const isospec_reconstruction* r);
ISOSPEC_API double isospec_reconstruction_min_det(const isospec_reconstruction* r);
ISOSPEC_API double isospec_reconstruction_max_condition(
    const isospec_reconstruction* r);
ISOSPEC_API size_t isospec_reconstruction_warning_count(
    const isospec_reconstruction* r);
ISOSPEC_API const char* isospec_reconstruction_warning(
    const isospec_reconstruction* r, size_t i);
ISOSPEC_API isospec_status isospec_reconstruction_write_csv(
    const isospec_reconstruction* r, const char* path);
ISOSPEC_API isospec_status isospec_reconstruction_write_sidecar(
    const isospec_reconstruction* r, const char* path);

/* Max Chebyshev-in-t deviation over x <= L/2 (16 nodes, 50 probes). */
ISOSPEC_API isospec_status isospec_path_smoothness(
    const isospec_path* p, const isospec_potential* pot0,
    const isospec_reconstruct_options* opts, double* max_inner);

/* Closed-form rank-one reconstruction at eigenvalue `energy` of pot0. */
ISOSPEC_API isospec_status isospec_rank_one_oracle(
    const isospec_potential* pot0, double energy, double delta_c,
    isospec_potential** out);

/* Verification. */
typedef struct isospec_verify_tolerances {
  double eigen;
  double weight;
  double radius_fraction;
  int margin;
  double phase_tol;
  double ode_tol;
} isospec_verify_tolerances;

typedef struct isospec_record {
  double t;
  double eig_dev;
  double weight_dev;
  int det_positive;
  int pass;
} isospec_record;

ISOSPEC_API void isospec_verify_tolerances_default(
    isospec_verify_tolerances* tol);
ISOSPEC_API isospec_status isospec_check_isospectral(
    const isospec_potential* pot, const double* target, size_t target_count,
    int count, double tol, isospec_record* out);
/* Single-record report comparing the lowest `count` eigenvalues of pot with
   a target list; records carry t = 0. */
ISOSPEC_API isospec_status isospec_spectrum_report(
    const isospec_potential* pot, const double* target, size_t target_count,
    int count, const isospec_verify_tolerances* tol, isospec_report** out);
ISOSPEC_API isospec_status isospec_path_report(
    const isospec_path* p, const isospec_potential* pot0, const double* ts,
    size_t t_count, const isospec_verify_tolerances* tol, isospec_report** out);
ISOSPEC_API void isospec_report_free(isospec_report* r);
ISOSPEC_API int isospec_report_pass(const isospec_report* r);
ISOSPEC_API size_t isospec_report_record_count(const isospec_report* r);
ISOSPEC_API isospec_status isospec_report_record(const isospec_report* r,
                                                 size_t i, isospec_record* out);
ISOSPEC_API size_t isospec_report_l1_count(const isospec_report* r);
ISOSPEC_API const double* isospec_report_l1_increments(const isospec_report* r);
ISOSPEC_API isospec_status isospec_report_write(const isospec_report* r,
                                                const char* path);

#ifdef __cplusplus
}
#endif

#endif
