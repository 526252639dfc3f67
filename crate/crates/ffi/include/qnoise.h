#ifndef QNOISE_H
#define QNOISE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum QnStatus {
  QN_STATUS_OK = 0,
  QN_STATUS_NULL_POINTER = 1,
  QN_STATUS_INVALID_ARGUMENT = 2,
  QN_STATUS_INVALID_STATE = 3,
  QN_STATUS_NUMERICAL = 4,
  QN_STATUS_BUFFER_TOO_SMALL = 5,
  QN_STATUS_PANIC = 6,
} QnStatus;

/**
 * Channel families accepted by `qn_evolve`.
 */
typedef enum QnChannel {
  QN_CHANNEL_DEPHASING = 0,
  QN_CHANNEL_TRIT_FLIP = 1,
  QN_CHANNEL_TRIT_PHASE_FLIP = 2,
  QN_CHANNEL_DEPOLARIZING = 3,
} QnChannel;

/**
 * GD prefactor convention.
 */
typedef enum QnGdConvention {
  QN_GD_CONVENTION_PAPER = 0,
  QN_GD_CONVENTION_RAW = 1,
} QnGdConvention;

/**
 * Opaque bipartite density matrix.
 */
typedef struct QnState QnState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Maximally entangled state of two `d`-level systems.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum QnStatus qn_bell_state(size_t d, struct QnState **out);

/**
 * Builds a validated state from row-major real and imaginary parts of
 * length `(d1*d2)^2`. `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `(d1*d2)^2` readable doubles.
 */
enum QnStatus qn_state_from_parts(size_t d1,
                                  size_t d2,
                                  const double *re,
                                  const double *im,
                                  struct QnState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle from this library not yet freed.
 */
void qn_state_free(struct QnState *state);

/**
 * Subsystem dimensions of a state.
 *
 * # Safety
 * All pointers must be valid.
 */
enum QnStatus qn_state_dims(const struct QnState *state, size_t *d1, size_t *d2);

/**
 * Copies the matrix into row-major `re`/`im` buffers of length `len`,
 * which must be at least `(d1*d2)^2`.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles each.
 */
enum QnStatus qn_state_entries(const struct QnState *state, double *re, double *im, size_t len);

/**
 * Applies local channels for time `t` with rates `q_a` and `q_b`.
 * Both subsystems must be qutrits.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum QnStatus qn_evolve(const struct QnState *state,
                        enum QnChannel channel_a,
                        enum QnChannel channel_b,
                        double q_a,
                        double q_b,
                        double t,
                        struct QnState **out);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum QnStatus qn_negativity(const struct QnState *state, double *out);

/**
 * Closed-form lower bound on geometric discord, clamped at zero.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum QnStatus qn_gd_lower_bound(const struct QnState *state, enum QnGdConvention conv, double *out);

/**
 * Exact geometric discord (unscaled distance) by multi-start search.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum QnStatus qn_gd_exact(const struct QnState *state, size_t restarts, uint64_t seed, double *out);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *qn_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QNOISE_H */
