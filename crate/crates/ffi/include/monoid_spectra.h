#ifndef MONOID_SPECTRA_H
#define MONOID_SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MS_OK 0

/**
 * The suite ran and at least one check failed; the report is still returned.
 */
#define MS_CHECK_FAILED 1

#define MS_PARSE_ERROR 2

#define MS_UNSUPPORTED 3

#define MS_INVALID_ARGUMENT 4

#define MS_INTERNAL 5

/**
 * Opaque monoid handle.
 */
typedef struct MsMonoid MsMonoid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a monoid from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer. On
 * success `*out` owns a handle that must be passed to [`ms_monoid_free`].
 */
int32_t ms_monoid_from_json(const char *json, struct MsMonoid **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must come from [`ms_monoid_from_json`] and not have been freed.
 */
void ms_monoid_free(struct MsMonoid *m);

/**
 * Membership of an integer in a numerical monoid.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
int32_t ms_monoid_contains_int(const struct MsMonoid *m, int64_t value, bool *out);

/**
 * Membership of an integer vector in an affine monoid.
 *
 * # Safety
 * `m` must be a live handle, `coords` must point to `len` values and `out`
 * must be a valid pointer.
 */
int32_t ms_monoid_contains_vector(const struct MsMonoid *m,
                                  const int64_t *coords,
                                  size_t len,
                                  bool *out);

/**
 * Number of prime s-ideals, certified on the window of radius `bound`
 * (`bound < 0` picks the default for the monoid).
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
int32_t ms_monoid_prime_count(const struct MsMonoid *m, int64_t bound, size_t *out);

/**
 * Runs a verification suite on `m` and returns the report as text, or JSON
 * when `json` is true. Returns `MS_OK` when every check passed and
 * `MS_CHECK_FAILED` otherwise; in both cases `*report` must be released with
 * [`ms_string_free`]. `bound < 0` picks the default.
 *
 * # Safety
 * `m` must be a live handle, `suite` a NUL-terminated string and `report` a
 * valid pointer.
 */
int32_t ms_run_suite(const struct MsMonoid *m,
                     const char *suite,
                     int64_t bound,
                     uint64_t seed,
                     bool json,
                     char **report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ms_string_free(char *s);

/**
 * Message of the most recent error on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *ms_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOID_SPECTRA_H */
