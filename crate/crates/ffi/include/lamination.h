#ifndef LAMINATION_H
#define LAMINATION_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum LamStatus {
  LAM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LAM_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  LAM_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed angle, leaf, polygon, suite name or JSON.
   */
  LAM_STATUS_PARSE = 3,
  /**
   * Well-formed input outside the domain of the operation (not MAC, not
   * SCM, crossing leaves, bad degree, ...).
   */
  LAM_STATUS_DOMAIN = 4,
  /**
   * A verification suite found a violation.
   */
  LAM_STATUS_VERIFICATION_FAILED = 5,
  /**
   * Internal error; the call was abandoned.
   */
  LAM_STATUS_PANIC = 6,
} LamStatus;

/**
 * A lamination document: leaves with depths, polygons, and an optional
 * critical portrait.
 */
typedef struct LamLamination LamLamination;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * success. Valid until the next call on the same thread.
 */
const char *lam_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void lam_string_free(char *s);

/**
 * `sigma_d(angle)`, e.g. `"1/3"` to `"2/3"` for `degree` 2.
 *
 * # Safety
 * `angle` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_sigma(uint32_t degree, const char *angle, char **out);

/**
 * JSON description of the MAC leaf `major` (`"p/q,r/s"`), including its
 * co-roots.
 *
 * # Safety
 * `major` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_mac_data(uint32_t degree, const char *major, char **out);

/**
 * Co-roots of the MAC leaf `major` as a JSON array of fractions.
 *
 * # Safety
 * `major` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_coroots(uint32_t degree, const char *major, char **out);

/**
 * The SCM polygon of a MAC leaf, as text such as `{1/8, 1/4, 3/8, 3/4}`.
 *
 * # Safety
 * `major` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_mac_to_scm(uint32_t degree, const char *major, char **out);

/**
 * The MAC leaf of an SCM polygon (`"p/q,r/s,..."`), as text `(a, b)`.
 *
 * # Safety
 * `polygon` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_scm_to_mac(uint32_t degree, const char *polygon, char **out);

/**
 * The canonical lamination of a MAC leaf, pulled back `depth` times.
 *
 * # Safety
 * `major` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_mac_lamination(uint32_t degree,
                                  const char *major,
                                  size_t depth,
                                  struct LamLamination **out);

/**
 * The canonical lamination of an SCM polygon, pulled back `depth` times.
 *
 * # Safety
 * `polygon` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_scm_lamination(uint32_t degree,
                                  const char *polygon,
                                  size_t depth,
                                  struct LamLamination **out);

/**
 * Parses a lamination JSON document.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum LamStatus lam_lamination_from_json(const char *text_in, struct LamLamination **out);

/**
 * Canonical compact JSON for a lamination.
 *
 * # Safety
 * `lam` must be a live handle; `out` must be writable.
 */
enum LamStatus lam_lamination_to_json(const struct LamLamination *lam, char **out);

/**
 * SVG chord diagram, `width_px` pixels square.
 *
 * # Safety
 * `lam` must be a live handle; `out` must be writable.
 */
enum LamStatus lam_lamination_svg(const struct LamLamination *lam, uint32_t width_px, char **out);

/**
 * Number of leaves (polygon sides not counted).
 *
 * # Safety
 * `lam` must be a live handle; `out` must be writable.
 */
enum LamStatus lam_lamination_leaf_count(const struct LamLamination *lam, size_t *out);

/**
 * Degree of the lamination.
 *
 * # Safety
 * `lam` must be a live handle; `out` must be writable.
 */
enum LamStatus lam_lamination_degree(const struct LamLamination *lam, uint32_t *out);

/**
 * Releases a lamination handle. Null is ignored.
 *
 * # Safety
 * `lam` must come from this library and not have been freed already.
 */
void lam_lamination_free(struct LamLamination *lam);

/**
 * Runs a verification suite (`"csl"`, `"coroot"`, `"roundtrip"`,
 * `"invariance"`, `"scm"`, `"kiwi"` or `"all"`) over MAC leaves of period at
 * most `max_period`. The JSON reports are written to `out` (which may be
 * null) whether or not the suite passes; a violation returns
 * `VerificationFailed`.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `out` must be null or writable.
 */
enum LamStatus lam_check(const char *suite, uint32_t degree, uint32_t max_period, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAMINATION_H */
