#ifndef GERBE_FFI_H
#define GERBE_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GerbeStatus {
  GERBE_STATUS_OK = 0,
  /**
   * A well-formed question with a negative answer.
   */
  GERBE_STATUS_MATHEMATICAL = 1,
  /**
   * Malformed or inconsistent input.
   */
  GERBE_STATUS_INPUT = 2,
  /**
   * A size or order cap was hit.
   */
  GERBE_STATUS_RESOURCE = 3,
  GERBE_STATUS_NULL_POINTER = 4,
  GERBE_STATUS_INVALID_UTF8 = 5,
  GERBE_STATUS_PANIC = 6,
} GerbeStatus;

/**
 * A Q/Z-valued cochain on a group or an action groupoid.
 */
typedef struct GerbeCochain GerbeCochain;

/**
 * A finite group.
 */
typedef struct GerbeGroup GerbeGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a group description (`table`, `perm` or `abelian` JSON).
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum GerbeStatus gerbe_group_from_json(const char *json, struct GerbeGroup **out);

/**
 * Order of the group, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a handle from [`gerbe_group_from_json`].
 */
size_t gerbe_group_order(const struct GerbeGroup *g);

/**
 * Canonical table JSON of the group.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GerbeStatus gerbe_group_to_json(const struct GerbeGroup *g, char **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void gerbe_group_free(struct GerbeGroup *g);

/**
 * `H^degree(G, Q/Z)` as `{"factors": [...], "generators": [...]}`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GerbeStatus gerbe_cohomology_json(const struct GerbeGroup *g, size_t degree, char **out);

/**
 * Parses a cochain carrying its own `base`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum GerbeStatus gerbe_cochain_from_json(const char *json, struct GerbeCochain **out);

/**
 * # Safety
 * `c` must be null or a live handle.
 */
size_t gerbe_cochain_degree(const struct GerbeCochain *c);

/**
 * Writes 1 to `out` when the cochain is a cocycle, else 0.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum GerbeStatus gerbe_cochain_is_cocycle(const struct GerbeCochain *c, int32_t *out);

/**
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum GerbeStatus gerbe_cochain_to_json(const struct GerbeCochain *c, char **out);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void gerbe_cochain_free(struct GerbeCochain *c);

/**
 * Runs a command such as `"dual"` or `"gerbe.rep.count"` and writes the
 * JSON report to `report`. `options` may be null or a JSON object with
 * `level_multiplier`, `max_order`, `max_matrix_dim` and `emit_witness`.
 * The returned status mirrors the report: `Ok` exactly when its status is
 * `"ok"`.
 *
 * # Safety
 * String arguments must be nul-terminated; `report` must be valid.
 */
enum GerbeStatus gerbe_run_command(const char *command,
                                   const char *payload,
                                   const char *options,
                                   char **report);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gerbe_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *gerbe_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GERBE_FFI_H */
