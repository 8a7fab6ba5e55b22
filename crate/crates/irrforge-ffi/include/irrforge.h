#ifndef IRRFORGE_H
#define IRRFORGE_H

/* Generated by cbindgen from crates/irrforge-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IrrStatus {
  IRR_STATUS_OK = 0,
  IRR_STATUS_NULL_POINTER = 1,
  IRR_STATUS_INVALID_INPUT = 2,
  IRR_STATUS_REJECTED = 3,
  IRR_STATUS_NUMERICAL = 4,
  IRR_STATUS_PANIC = 5,
} IrrStatus;

typedef enum IrrSimilarOutcome {
  IRR_SIMILAR_OUTCOME_SIMILAR = 0,
  IRR_SIMILAR_OUTCOME_OBSTRUCTED = 1,
  IRR_SIMILAR_OUTCOME_INCONCLUSIVE = 2,
} IrrSimilarOutcome;

typedef enum IrrObstructionKind {
  IRR_OBSTRUCTION_KIND_NONE = 0,
  IRR_OBSTRUCTION_KIND_EIG_MULTIPLICITY_TOO_LARGE = 1,
  IRR_OBSTRUCTION_KIND_QUADRATIC_DEPENDENCE = 2,
  IRR_OBSTRUCTION_KIND_SCALAR_IN2X2 = 3,
} IrrObstructionKind;

/**
 * Opaque square complex matrix.
 */
typedef struct IrrMatrix IrrMatrix;

typedef struct IrrTolerances {
  double rank_tol;
  double cluster_tol;
  double cert_tol;
  double gap_min;
} IrrTolerances;

/**
 * Obstruction data: an eigenvalue (`witness_len == 1`) or the coefficients
 * `(a, b, c)` of `aI + bT + cT^2 = 0` (`witness_len == 3`), stored as
 * interleaved `(re, im)` pairs.
 */
typedef struct IrrObstruction {
  enum IrrObstructionKind kind;
  double witness[6];
  size_t witness_len;
} IrrObstruction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *irr_last_error_message(void);

struct IrrTolerances irr_tolerances_default(void);

/**
 * Builds an `n x n` matrix from `2 n^2` doubles, row-major, `(re, im)`
 * interleaved.
 *
 * # Safety
 * `entries` must point to `2 * n * n` readable doubles.
 */
enum IrrStatus irr_matrix_new(size_t n, const double *entries, struct IrrMatrix **out_matrix);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void irr_matrix_free(struct IrrMatrix *m);

/**
 * Dimension of `m`, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t irr_matrix_dim(const struct IrrMatrix *m);

/**
 * Copies the entries of `m` into `buf` in the layout of [`irr_matrix_new`].
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
enum IrrStatus irr_matrix_entries(const struct IrrMatrix *m, double *buf, size_t len);

/**
 * Certified irreducibility. `tol` may be null for the default preset.
 *
 * # Safety
 * Pointers must be valid; `commutant_dim` may be null.
 */
enum IrrStatus irr_is_irreducible(const struct IrrMatrix *m,
                                  const struct IrrTolerances *tol,
                                  bool *irreducible,
                                  size_t *commutant_dim);

/**
 * Whether `count` matrices generate `M_n` as a *-algebra.
 *
 * # Safety
 * `set` must point to `count` live handles of equal dimension.
 */
enum IrrStatus irr_generates(const struct IrrMatrix *const *set,
                             size_t count,
                             const struct IrrTolerances *tol,
                             bool *generates,
                             size_t *commutant_dim);

/**
 * Similarity of a normal matrix to an irreducible one.
 *
 * # Safety
 * Pointers must be valid; `tol` and `obstruction` may be null.
 */
enum IrrStatus irr_similar_normal(const struct IrrMatrix *m,
                                  const struct IrrTolerances *tol,
                                  enum IrrSimilarOutcome *outcome,
                                  struct IrrMatrix **x,
                                  struct IrrMatrix **x_inv,
                                  struct IrrObstruction *obstruction);

/**
 * Similarity of an arbitrary matrix to an irreducible one through its
 * semisimple part. On [`IrrSimilarOutcome::Inconclusive`] the obstruction
 * kind names the failed condition and carries no witness.
 *
 * # Safety
 * Pointers must be valid; `tol` and `obstruction` may be null.
 */
enum IrrStatus irr_similar_spectral(const struct IrrMatrix *m,
                                    const struct IrrTolerances *tol,
                                    enum IrrSimilarOutcome *outcome,
                                    struct IrrMatrix **x,
                                    struct IrrMatrix **x_inv,
                                    struct IrrObstruction *obstruction);

/**
 * `T = S + K` with `S` diagonalizable, `K` nilpotent, `SK = KS`.
 *
 * # Safety
 * Pointers must be valid; `tol` may be null.
 */
enum IrrStatus irr_dunford(const struct IrrMatrix *m,
                           const struct IrrTolerances *tol,
                           struct IrrMatrix **s,
                           struct IrrMatrix **k);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRRFORGE_H */
