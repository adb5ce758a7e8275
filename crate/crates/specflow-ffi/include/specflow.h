#ifndef SPECFLOW_H
#define SPECFLOW_H

/* Generated by cbindgen from the specflow-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum SfStatus {
  SfOk = 0,
  SfNullPointer = 1,
  SfInvalidArgument = 2,
  SfSpaceMismatch = 3,
  SfTrackingFailure = 4,
  SfScatteringFailure = 5,
  SfInternalError = 6,
} SfStatus;

// Opaque handle to a mu-invariant step function.
typedef struct SfMu SfMu;

// Opaque rigged multiset handle.
typedef struct SfRiggedSet SfRiggedSet;

// Opaque handle to a lifted argument track.
typedef struct SfTrack SfTrack;

// One row of the spectral shift decomposition.
typedef struct SfXiRow {
  double xi;
  double xi_ac;
  double xi_s;
  double mu_s;
  double bk_residual;
  double min_singval;
} SfXiRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *sf_last_error_message(void);

// Frees a string returned by one of the `_to_json` functions.
//
// # Safety
// `s` must come from this library and not have been freed already.
void sf_string_free(char *s);

// Parses a rigged set from its JSON form
// `{"space":"circle"|"line","points":[{"x":..,"mult":..},..]}`.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum SfStatus sf_rigged_set_from_json(const char *json, struct SfRiggedSet **out);

// Serializes a rigged set back to JSON; caller frees via `sf_string_free`.
// Returns NULL on error.
//
// # Safety
// `set` must be a live handle from this library.
char *sf_rigged_set_to_json(const struct SfRiggedSet *set);

// # Safety
// `set` must be a live handle; it is invalid afterwards.
void sf_rigged_set_free(struct SfRiggedSet *set);

// Total multiplicity of the non-sticky part.
//
// # Safety
// `set` and `out` must be valid pointers.
enum SfStatus sf_rigged_set_rank(const struct SfRiggedSet *set, uint32_t *out);

// Optimal-matching distance between two rigged sets of the same space.
//
// # Safety
// All pointers must be valid.
enum SfStatus sf_distance(const struct SfRiggedSet *a,
                          const struct SfRiggedSet *b,
                          double *out_cost);

// Quotient L1 distance between the counting functions of two circle sets.
//
// # Safety
// All pointers must be valid.
enum SfStatus sf_rho1(const struct SfRiggedSet *a, const struct SfRiggedSet *b, double *out);

// Tracks the spectra of pre-sampled unitary matrices along a parameter
// grid. `matrices` holds `node_count` row-major `dim x dim` complex
// matrices as interleaved re,im doubles (so `node_count * dim * dim * 2`
// values in total). A `node_tol` of zero or below selects the default.
//
// # Safety
// `rs` must hold `node_count` doubles, `matrices` the count given above,
// and `out` must be valid.
enum SfStatus sf_track_unitary_path(uintptr_t dim,
                                    uintptr_t node_count,
                                    const double *rs,
                                    const double *matrices,
                                    double node_tol,
                                    struct SfTrack **out);

// # Safety
// `track` must be a live handle; it is invalid afterwards.
void sf_track_free(struct SfTrack *track);

// Number of tracked eigenvalue arguments.
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_track_count(const struct SfTrack *track, uintptr_t *out);

// Number of grid nodes.
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_track_node_count(const struct SfTrack *track, uintptr_t *out);

// Unwrapped argument of track `j` at node `k`.
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_track_theta(const struct SfTrack *track, uintptr_t j, uintptr_t k, double *out);

// Sum of argument increments over the path (start-at-identity paths only).
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_track_endpoint_sum(const struct SfTrack *track, double *out);

// The mu-invariant of a tracked path (start-at-identity paths only).
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_mu_from_track(const struct SfTrack *track, struct SfMu **out);

// # Safety
// `mu` must be a live handle; it is invalid afterwards.
void sf_mu_free(struct SfMu *mu);

// Value at an angle in (0, 2pi); half-integers occur at jump angles.
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_mu_eval(const struct SfMu *mu, double theta, double *out);

// Exact integral over (0, 2pi).
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_mu_integral(const struct SfMu *mu, double *out);

// Winding number of a loop track (empty endpoint spectra).
//
// # Safety
// Pointers must be valid.
enum SfStatus sf_loop_winding(const struct SfTrack *track, int64_t *out);

// Resolvent kernel of the free lattice operator at `z = re + i im`.
//
// # Safety
// Output pointers must be valid.
enum SfStatus sf_lattice_green(double re,
                               double im,
                               int64_t m,
                               int64_t n,
                               double *out_re,
                               double *out_im);

// Decomposes the spectral shift function at `(lambda, r)` for a lattice
// model with `k` coupled sites. `j_matrix` holds the Hermitian coupling as
// `k * k` interleaved re,im doubles, row-major.
//
// # Safety
// `sites` and `kappa` must hold `k` values, `j_matrix` `k * k * 2`
// doubles, and `out` must be valid.
enum SfStatus sf_xi_decompose(uintptr_t k,
                              const int64_t *sites,
                              const double *kappa,
                              const double *j_matrix,
                              double lambda,
                              double r,
                              struct SfXiRow *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECFLOW_H */
