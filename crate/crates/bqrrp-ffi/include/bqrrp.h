#ifndef BQRRP_H
#define BQRRP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Panel QR selection for `bqrrp_config`.
 */
typedef enum BqrrpPanel {
  BqrrpPanel_Householder = 0,
  BqrrpPanel_CholeskyQr = 1,
} BqrrpPanel;

/**
 * Column permutation selection for `bqrrp_config`.
 */
typedef enum BqrrpPerm {
  BqrrpPerm_Sequential = 0,
  BqrrpPerm_Gather = 1,
} BqrrpPerm;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum BqrrpStatus {
  BqrrpStatus_Ok = 0,
  BqrrpStatus_NullPointer = 1,
  BqrrpStatus_InvalidArgument = 2,
  BqrrpStatus_DimensionMismatch = 3,
  BqrrpStatus_SingularMatrix = 4,
  BqrrpStatus_CholeskyBreakdown = 5,
  BqrrpStatus_ConfigError = 6,
  BqrrpStatus_NumericalError = 7,
  BqrrpStatus_InternalError = 8,
} BqrrpStatus;

/**
 * Wide QRCP selection for `bqrrp_config`.
 */
typedef enum BqrrpWide {
  BqrrpWide_LuQr = 0,
  BqrrpWide_Reference = 1,
} BqrrpWide;

/**
 * Opaque factorization result; free with `bqrrp_free`.
 */
typedef struct BqrrpFactorization BqrrpFactorization;

/**
 * Driver configuration. Obtain defaults from `bqrrp_config_default` and
 * override fields as needed.
 */
typedef struct BqrrpCConfig {
  uint64_t block;
  double gamma;
  enum BqrrpPanel panel;
  enum BqrrpWide wide;
  enum BqrrpPerm perm;
  double rank_tol_factor;
  uint64_t seed;
} BqrrpCConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default configuration: block 64, gamma 1, Householder panel, LU-based
 * wide QRCP, sequential permutation, seed 0.
 */
struct BqrrpCConfig bqrrp_config_default(void);

/**
 * Factors an m-by-n column-major matrix. On success `*out_handle` owns
 * the result.
 *
 * # Safety
 * `data` must point to at least `rows * cols` doubles; `out_handle` must
 * be a valid pointer. The input buffer is copied, not retained.
 */
enum BqrrpStatus bqrrp_factor_dense(const double *data,
                                    uint64_t rows,
                                    uint64_t cols,
                                    const struct BqrrpCConfig *config,
                                    struct BqrrpFactorization **out_handle);

/**
 * Releases a factorization handle. A null handle is a no-op.
 *
 * # Safety
 * `handle` must come from `bqrrp_factor_dense` and not be freed twice.
 */
void bqrrp_free(struct BqrrpFactorization *handle);

/**
 * Inferred numerical rank; 0 for a null handle.
 *
 * # Safety
 * `handle` must be live or null.
 */
uint64_t bqrrp_rank(const struct BqrrpFactorization *handle);

/**
 * Rows of the factored matrix; 0 for a null handle.
 *
 * # Safety
 * `handle` must be live or null.
 */
uint64_t bqrrp_rows(const struct BqrrpFactorization *handle);

/**
 * Columns of the factored matrix; 0 for a null handle.
 *
 * # Safety
 * `handle` must be live or null.
 */
uint64_t bqrrp_cols(const struct BqrrpFactorization *handle);

/**
 * Copies the in-place factored storage (R above the diagonal, reflector
 * tails below) into a caller buffer of rows*cols doubles, column-major.
 *
 * # Safety
 * `out` must hold rows*cols doubles.
 */
enum BqrrpStatus bqrrp_factored_matrix(const struct BqrrpFactorization *handle, double *out);

/**
 * Copies the explicit upper-trapezoid R (rank-by-cols, column-major,
 * zeros below the diagonal) into a caller buffer.
 *
 * # Safety
 * `out` must hold rank*cols doubles.
 */
enum BqrrpStatus bqrrp_r_factor(const struct BqrrpFactorization *handle, double *out);

/**
 * Copies the reflector scalar factors (length min(rows, cols)).
 *
 * # Safety
 * `out` must hold min(rows, cols) doubles.
 */
enum BqrrpStatus bqrrp_tau(const struct BqrrpFactorization *handle, double *out);

/**
 * Copies the one-based pivot vector (length cols).
 *
 * # Safety
 * `out` must hold cols 64-bit integers.
 */
enum BqrrpStatus bqrrp_pivots(const struct BqrrpFactorization *handle, int64_t *out);

/**
 * Builds the leading `ncols` columns of the explicit orthonormal factor
 * into a caller buffer of rows*ncols doubles, column-major.
 *
 * # Safety
 * `out` must hold rows*ncols doubles.
 */
enum BqrrpStatus bqrrp_explicit_q(const struct BqrrpFactorization *handle,
                                  uint64_t ncols,
                                  double *out);

/**
 * Relative reconstruction residual of the factorization against the
 * original column-major matrix it was computed from.
 *
 * # Safety
 * `original` must hold rows*cols doubles; `out` must be valid.
 */
enum BqrrpStatus bqrrp_residual(const struct BqrrpFactorization *handle,
                                const double *original,
                                double *out);

/**
 * Static descriptive string for a status code.
 */
const char *bqrrp_status_message(enum BqrrpStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BQRRP_H */
