#ifndef ULTRADYN_H
#define ULTRADYN_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by all functions.
 */
typedef enum UdStatus {
  UD_STATUS_OK = 0,
  UD_STATUS_NULL_POINTER = 1,
  UD_STATUS_INVALID_UTF8 = 2,
  UD_STATUS_PARSE = 3,
  UD_STATUS_PRECONDITION = 4,
  UD_STATUS_RESOURCE = 5,
  UD_STATUS_INDETERMINATE = 6,
  UD_STATUS_PANIC = 7,
  UD_STATUS_OTHER = 8,
} UdStatus;

/**
 * A rational map over Q.
 */
typedef struct UdMap UdMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a map such as `"z^2 - 3/4"` into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UdStatus ud_map_parse(const char *text, struct UdMap **out);

/**
 * Releases a handle from `ud_map_parse`. Null is ignored.
 *
 * # Safety
 * `map` must come from `ud_map_parse` and not be freed twice.
 */
void ud_map_free(struct UdMap *map);

/**
 * Degree of the map, or -1 for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
int64_t ud_map_degree(const struct UdMap *map);

/**
 * Canonical text of the map.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum UdStatus ud_map_render(const struct UdMap *map, char **out);

/**
 * Fixed points with multipliers and classes at `p`, as JSON.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum UdStatus ud_analyze(const struct UdMap *map, uint64_t p, char **out);

/**
 * PCF certificate as JSON; `max_steps == 0` uses the default budget.
 *
 * # Safety
 * `map` must be a live handle and `out` a valid pointer.
 */
enum UdStatus ud_pcf_check(const struct UdMap *map, size_t max_steps, char **out);

/**
 * General threshold T for (p, d), with ε = p^-T.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UdStatus ud_epsilon_threshold(uint64_t p, size_t d, int64_t *out);

/**
 * Runs a command-line invocation (`argv[0]` is the program name) and
 * returns its standard output. `exit_code` receives the CLI exit code.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; the out pointers must be valid.
 */
enum UdStatus ud_cli_run(int argc, const char *const *argv, char **out, int *exit_code);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ud_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ud_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ULTRADYN_H */
