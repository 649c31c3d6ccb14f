#ifndef METASTABLE_H
#define METASTABLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_INPUT = 2,
  MS_STATUS_NUMERIC_FAILURE = 3,
  MS_STATUS_VERIFY_FAILED = 4,
  MS_STATUS_PANIC = 5,
} MsStatus;

/**
 * Completed jump-chain run.
 */
typedef struct MsJumpRun MsJumpRun;

/**
 * Transition graph of the uncoupled landscape.
 */
typedef struct MsLandscape MsLandscape;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Owned by the
 * library; valid until the next call on the same thread.
 */
const char *ms_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ms_string_free(char *s);

/**
 * Builds the zero-coupling transition graph. `orbits != 0` selects the
 * orbit quotient; otherwise every point is listed (n <= 10).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum MsStatus ms_landscape_new(size_t n, int32_t orbits, struct MsLandscape **out);

/**
 * Node and edge counts of the graph (classes in quotient mode).
 *
 * # Safety
 * `h` must be a live handle; `minima` and `saddles` valid or NULL.
 */
enum MsStatus ms_landscape_counts(const struct MsLandscape *h, size_t *minima, size_t *saddles);

/**
 * Degree of node `node`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum MsStatus ms_landscape_degree(const struct MsLandscape *h, size_t node, size_t *out);

/**
 * Graphviz rendering; free with `ms_string_free`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum MsStatus ms_landscape_dot(const struct MsLandscape *h, char **out);

/**
 * # Safety
 * `h` must come from `ms_landscape_new` and not have been freed.
 */
void ms_landscape_free(struct MsLandscape *h);

/**
 * Smallest nonzero eigenvalue of the two-orbit chain. A NaN or
 * non-positive `q_y` selects the Eyring-Kramers default.
 *
 * # Safety
 * `lambda2` must be writable.
 */
enum MsStatus ms_spectral_gap(size_t n, double gamma, double eps, double q_y, double *lambda2);

/**
 * `B_k -> B_(k-1)` table as JSON; free with `ms_string_free`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_rate_table_json(size_t n, double gamma, double eps, char **out);

/**
 * Jump chain from the alternating state.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_jump_run_new(size_t n,
                              double gamma,
                              double eps,
                              size_t events,
                              uint64_t seed,
                              struct MsJumpRun **out);

/**
 * Number of events and final interface count.
 *
 * # Safety
 * `h` must be a live handle; the out pointers valid or NULL.
 */
enum MsStatus ms_jump_run_summary(const struct MsJumpRun *h,
                                  size_t *events,
                                  size_t *final_p,
                                  double *elapsed);

/**
 * `t,p,label` trace; free with `ms_string_free`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum MsStatus ms_jump_run_trace_csv(const struct MsJumpRun *h, char **out);

/**
 * # Safety
 * `h` must come from `ms_jump_run_new` and not have been freed.
 */
void ms_jump_run_free(struct MsJumpRun *h);

/**
 * Runs the invariant suite. Returns `VerifyFailed` if any check fails.
 *
 * # Safety
 * `passed` and `total` must be valid or NULL.
 */
enum MsStatus ms_verify(size_t *passed, size_t *total);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METASTABLE_H */
