#ifndef COXVAR_H
#define COXVAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum {
    COXVAR_STATUS_OK = 0,
    COXVAR_STATUS_NULL_POINTER = 1,
    COXVAR_STATUS_INVALID_ARGUMENT = 2,
    COXVAR_STATUS_UNSUPPORTED = 3,
    COXVAR_STATUS_RESOURCE_LIMIT = 4,
    COXVAR_STATUS_IO = 5,
    COXVAR_STATUS_OVERFLOW = 6,
    COXVAR_STATUS_BUFFER_TOO_SMALL = 7,
    COXVAR_STATUS_PANIC = 8,
} CoxvarStatus;

/**
 * Predicted kind of the variety.
 */
typedef enum {
    COXVAR_KIND_MAX_COMPONENTS = 0,
    COXVAR_KIND_ALL_COMPACT = 1,
    COXVAR_KIND_NESTED_PAIR = 2,
    COXVAR_KIND_SINGLE_SPHERE = 3,
    COXVAR_KIND_EMPTY = 4,
    COXVAR_KIND_UNDECIDED = 5,
} CoxvarKind;

/**
 * Output of the predictor.
 */
typedef struct CoxvarPrediction CoxvarPrediction;

/**
 * Coefficients `(A, B, C, D)`, dimension and exponent of a quartic family
 * member.
 */
typedef struct CoxvarQuartic CoxvarQuartic;

/**
 * Output of the grid oracle.
 */
typedef struct CoxvarReport CoxvarReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next `coxvar_*` call on the same thread.
 */
const char *coxvar_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *coxvar_version(void);

/**
 * Creates a quartic handle for `A σ2 + B σ1² + C σ1 + D` in `n` variables
 * with substitution exponent `m` (degree `2^(m+1)`).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
CoxvarStatus coxvar_quartic_new(double a,
                                double b,
                                double c,
                                double d,
                                size_t n,
                                uint32_t m,
                                CoxvarQuartic **out);

/**
 * # Safety
 * `q` must be NULL or a handle from [`coxvar_quartic_new`] not yet freed.
 */
void coxvar_quartic_free(CoxvarQuartic *q);

/**
 * Evaluates the polynomial at `x[0..len]`.
 *
 * # Safety
 * `q` must be a live handle, `x` must point to `len` readable doubles and
 * `out` to a writable double.
 */
CoxvarStatus coxvar_quartic_eval(const CoxvarQuartic *q, const double *x, size_t len, double *out);

/**
 * Runs the predictor with relative tolerance `tol` (`<= 0` selects the
 * default).
 *
 * # Safety
 * `q` must be a live handle and `out` writable.
 */
CoxvarStatus coxvar_predict(const CoxvarQuartic *q, double tol, CoxvarPrediction **out);

/**
 * # Safety
 * `p` must be NULL or a live prediction handle.
 */
void coxvar_prediction_free(CoxvarPrediction *p);

/**
 * # Safety
 * `p` must be a live prediction handle and `kind` writable.
 */
CoxvarStatus coxvar_prediction_kind(const CoxvarPrediction *p, CoxvarKind *kind);

/**
 * Component counts; any output pointer may be NULL to skip it.
 *
 * # Safety
 * `p` must be a live prediction handle; non-NULL outputs must be writable.
 */
CoxvarStatus coxvar_prediction_counts(const CoxvarPrediction *p,
                                      uint64_t *total,
                                      uint64_t *compact,
                                      uint64_t *unbounded,
                                      bool *nested);

/**
 * Copies the Betti vector into `buf[0..cap]` and stores its length in
 * `len` (0 when the kind has none). Returns `BUFFER_TOO_SMALL` with `len`
 * set when `cap` is insufficient.
 *
 * # Safety
 * `p` must be a live prediction handle, `len` writable and `buf` valid for
 * `cap` writes (it may be NULL when `cap` is 0).
 */
CoxvarStatus coxvar_prediction_betti(const CoxvarPrediction *p,
                                     uint64_t *buf,
                                     size_t cap,
                                     size_t *len);

/**
 * Prediction as a JSON string, released with [`coxvar_string_free`].
 *
 * # Safety
 * `p` must be a live prediction handle and `out` writable.
 */
CoxvarStatus coxvar_prediction_to_json(const CoxvarPrediction *p, char **out);

/**
 * Counts components on a grid. `half_width <= 0` or `resolution == 0`
 * selects the automatic box or default resolution.
 *
 * # Safety
 * `q` must be a live handle and `out` writable.
 */
CoxvarStatus coxvar_count_components(const CoxvarQuartic *q,
                                     double half_width,
                                     size_t resolution,
                                     CoxvarReport **out);

/**
 * # Safety
 * `r` must be NULL or a live report handle.
 */
void coxvar_report_free(CoxvarReport *r);

/**
 * Totals of a report; any output pointer may be NULL.
 *
 * # Safety
 * `r` must be a live report handle; non-NULL outputs must be writable.
 */
CoxvarStatus coxvar_report_counts(const CoxvarReport *r,
                                  uint64_t *total,
                                  uint64_t *compact,
                                  size_t *nesting_pairs);

/**
 * Report as a JSON string, released with [`coxvar_string_free`].
 *
 * # Safety
 * `r` must be a live report handle and `out` writable.
 */
CoxvarStatus coxvar_report_to_json(const CoxvarReport *r, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void coxvar_string_free(char *s);

/**
 * Name of a kind as a static string (`"max_components"`, ...).
 */
const char *coxvar_kind_name(CoxvarKind kind);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COXVAR_H */
