#ifndef BATCHED_BANDITS_H
#define BATCHED_BANDITS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BbGridFamily {
  BB_GRID_FAMILY_MINIMAX = 0,
  BB_GRID_FAMILY_GEOMETRIC,
  BB_GRID_FAMILY_ARITHMETIC,
  BB_GRID_FAMILY_SEQUENTIAL,
} BbGridFamily;

typedef enum BbPolicy {
  BB_POLICY_BASE = 0,
  BB_POLICY_UCB1,
  BB_POLICY_ETC,
  BB_POLICY_UNIFORM,
} BbPolicy;

typedef enum BbStatus {
  BB_STATUS_OK = 0,
  BB_STATUS_NULL_POINTER,
  BB_STATUS_INVALID_ARGUMENT,
  BB_STATUS_INFEASIBLE_GRID,
  BB_STATUS_INVALID_GRID,
  BB_STATUS_DEGENERATE_INSTANCE,
  BB_STATUS_CONSTRAINT,
  BB_STATUS_DOMAIN,
  BB_STATUS_UNSUPPORTED,
  BB_STATUS_INTERNAL,
  BB_STATUS_BUFFER_TOO_SMALL,
} BbStatus;

/**
 * Opaque batch grid.
 */
typedef struct BbGrid BbGrid;

/**
 * Opaque Gaussian bandit instance.
 */
typedef struct BbInstance BbInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bb_version(void);

/**
 * Message for the most recent failure on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *bb_last_error(void);

void bb_clear_error(void);

/**
 * Builds a grid of the given family.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum BbStatus bb_grid_new(enum BbGridFamily family,
                          uint64_t horizon,
                          size_t batches,
                          size_t arms,
                          struct BbGrid **out);

/**
 * Validates an explicit list of batch endpoints.
 *
 * # Safety
 * `times` must point to `len` readable values; `out` as in [`bb_grid_new`].
 */
enum BbStatus bb_grid_from_times(const uint64_t *times,
                                 size_t len,
                                 uint64_t horizon,
                                 size_t arms,
                                 struct BbGrid **out);

/**
 * Number of batches, or 0 for a NULL handle.
 *
 * # Safety
 * `grid` must be NULL or a live handle.
 */
size_t bb_grid_len(const struct BbGrid *grid);

/**
 * Copies the endpoints into `buf`. `written` receives the number of
 * endpoints even when `cap` is too small.
 *
 * # Safety
 * `grid` must be a live handle, `buf` writable for `cap` values, `written` writable.
 */
enum BbStatus bb_grid_times(const struct BbGrid *grid, uint64_t *buf, size_t cap, size_t *written);

/**
 * # Safety
 * `grid` must be NULL or a handle from this library not yet freed.
 */
void bb_grid_free(struct BbGrid *grid);

/**
 * Instance with unit-variance Gaussian arms of the given means.
 *
 * # Safety
 * `means` must point to `len` readable values; `out` writable for one handle.
 */
enum BbStatus bb_instance_new(const double *means, size_t len, struct BbInstance **out);

/**
 * # Safety
 * `instance` must be NULL or a handle from this library not yet freed.
 */
void bb_instance_free(struct BbInstance *instance);

/**
 * Monte-Carlo expected regret over `reps` replications. Deterministic in `seed`.
 *
 * # Safety
 * Handles must be live; `mean` and `stderr` writable.
 */
enum BbStatus bb_mean_regret(enum BbPolicy policy,
                             double gamma,
                             const struct BbGrid *grid,
                             const struct BbInstance *instance,
                             size_t reps,
                             uint64_t seed,
                             double *mean,
                             double *stderr);

/**
 * Static-grid minimax lower bound at gap `delta`.
 *
 * # Safety
 * `grid` must be live and `out` writable.
 */
enum BbStatus bb_static_lb(const struct BbGrid *grid, double delta, size_t arms, double *out);

/**
 * Total-variation distance between two distributions on `len` points.
 *
 * # Safety
 * `p` and `q` must point to `len` readable values; `out` writable.
 */
enum BbStatus bb_tv_distance(const double *p, const double *q, size_t len, double *out);

/**
 * KL(p‖q); `+inf` when `q` misses mass of `p`.
 *
 * # Safety
 * As for [`bb_tv_distance`].
 */
enum BbStatus bb_kl_divergence(const double *p, const double *q, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BATCHED_BANDITS_H */
