#ifndef QDIRAC_H
#define QDIRAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QdStatus {
  QD_STATUS_OK = 0,
  QD_STATUS_NULL_POINTER = 1,
  QD_STATUS_DOMAIN = 2,
  QD_STATUS_VALIDITY = 3,
  QD_STATUS_STRUCTURAL = 4,
  QD_STATUS_CALIBRATION = 5,
  QD_STATUS_REGRESSION = 6,
  QD_STATUS_BUFFER_TOO_SMALL = 7,
  QD_STATUS_PANIC = 8,
} QdStatus;

// Operators available through [`qd_dense_window`].
typedef enum QdOperator {
  QD_OPERATOR_PI_A = 0,
  QD_OPERATOR_PI_B = 1,
  QD_OPERATOR_PI_B_STAR = 2,
  QD_OPERATOR_DIRAC = 3,
  QD_OPERATOR_GAMMA = 4,
} QdOperator;

// Opaque handle to a truncated quasi-spectral triple.
typedef struct QdTriple QdTriple;

typedef struct QdSignTable {
  int32_t j_squared;
  bool jd_commute;
  bool jgamma_anticommute;
  int32_t ko_dimension;
} QdSignTable;

typedef struct QdSpectrumLine {
  double eigenvalue;
  size_t multiplicity;
  int32_t twice_l;
  // +1 or -1
  int32_t sign;
} QdSpectrumLine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a triple truncated at `lmax`. `d_offset = 0.5` is the standard choice.
//
// # Safety
// `out` must be valid for writes. Free the handle with [`qd_triple_free`].
enum QdStatus qd_triple_new(int32_t twice_n,
                            int32_t twice_lmax,
                            double d1,
                            double d_offset,
                            struct QdTriple **out);

// # Safety
// `t` must come from [`qd_triple_new`] and not have been freed; null is ignored.
void qd_triple_free(struct QdTriple *t);

// Copies the last error message of this thread, NUL-terminated and
// truncated to `len` bytes. Returns the full message length plus one.
//
// # Safety
// `buf` must be valid for `len` bytes, or null with `len = 0`.
size_t qd_last_error_message(char *buf, size_t len);

// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_triple_dim(const struct QdTriple *t, size_t *out);

// Position of `|l, m, sign⟩` in the basis order; `sign` is +1 or -1.
//
// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_index_of(const struct QdTriple *t,
                          int32_t twice_l,
                          int32_t twice_m,
                          int32_t sign,
                          size_t *out);

// # Safety
// Out-pointers are valid for writes.
enum QdStatus qd_alpha(int32_t twice_n, int32_t twice_l, double *alpha0, double *alpha_plus);

// Closed-form order-one matrix elements `(c_BB, c_AB)`.
//
// # Safety
// Out-pointers are valid for writes.
enum QdStatus qd_order_one_oracle(int32_t twice_n,
                                  double d1,
                                  int32_t twice_l,
                                  int32_t twice_m,
                                  double *c_bb,
                                  double *c_ab);

// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_sign_table(const struct QdTriple *t, struct QdSignTable *out);

// Writes up to `cap` spectrum lines (ascending eigenvalue) and stores the
// total count in `len`. Pass `out = NULL, cap = 0` to query the count.
//
// # Safety
// `out` is valid for `cap` elements (or null with `cap = 0`); `len` is valid for writes.
enum QdStatus qd_spectrum(const struct QdTriple *t,
                          struct QdSpectrumLine *out,
                          size_t cap,
                          size_t *len);

// Largest order-one residual over all generator pairs and valid sectors.
//
// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_order_one_max(const struct QdTriple *t, double *out);

// # Safety
// `t` is a live handle; out-pointers are valid for writes.
enum QdStatus qd_hochschild(const struct QdTriple *t, double *max_residual, double *eigenvalue);

// Fredholm pairing summed over sectors `l ≤ lsum`.
//
// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_fredholm_pairing(const struct QdTriple *t, int32_t twice_lsum, double *out);

// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_cm_pairing(const struct QdTriple *t, double *out);

// # Safety
// `out` is valid for writes.
enum QdStatus qd_closed_form_pairing(int32_t twice_n, int32_t twice_cutoff, double *out);

// # Safety
// `t` is a live handle and `out` is valid for writes.
enum QdStatus qd_dixmier_slope(const struct QdTriple *t,
                               int32_t twice_lo,
                               int32_t twice_hi,
                               double *out);

// Dense restriction of an operator to sectors `lmin..=lmax`, row-major,
// real and imaginary parts in separate buffers of `cap` elements each.
// The side length goes to `n`; with null buffers and `cap = 0` only `n`
// is written.
//
// # Safety
// `re`/`im` are valid for `cap` elements (or null with `cap = 0`); `n` is valid for writes.
enum QdStatus qd_dense_window(const struct QdTriple *t,
                              enum QdOperator op,
                              int32_t twice_lmin,
                              int32_t twice_lmax,
                              double *re,
                              double *im,
                              size_t cap,
                              size_t *n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDIRAC_H */
