#ifndef TAUT_H
#define TAUT_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which counting route [`taut_hurwitz`] takes, passed as its integer value.
 */
typedef enum TautMethod {
  TAUT_METHOD_FAST = 0,
  TAUT_METHOD_BRUTE = 1,
} TautMethod;

/**
 * Outcome of a call. The first five values agree with the exit codes of
 * the `taut` command line tool.
 */
typedef enum TautStatus {
  TAUT_STATUS_OK = 0,
  TAUT_STATUS_INTERNAL = 1,
  TAUT_STATUS_BUDGET_EXCEEDED = 2,
  TAUT_STATUS_INVALID_DOMAIN = 3,
  TAUT_STATUS_RANK_DEFICIENT = 4,
  TAUT_STATUS_NULL_POINTER = 5,
  TAUT_STATUS_NOT_FOUND = 6,
  TAUT_STATUS_PANIC = 7,
} TautStatus;

/**
 * A table of linear Hodge integrals for one `(g, n)`.
 */
typedef struct TautHodgeTable TautHodgeTable;

/**
 * A computed Hurwitz number.
 */
typedef struct TautHurwitz TautHurwitz;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *taut_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *taut_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void taut_string_free(char *s);

/**
 * Counts connected covers of genus `genus` with profile `alpha` over
 * infinity. `budget` bounds the exhaustive search, 0 for the default.
 *
 * # Safety
 * `alpha` must point to `len` values and `out` to writable storage.
 */
enum TautStatus taut_hurwitz(uint32_t genus,
                             const uint32_t *alpha,
                             size_t len,
                             uint32_t method,
                             uint64_t budget,
                             struct TautHurwitz **out);

/**
 * `H` as an exact `"p/q"` string.
 *
 * # Safety
 * `value` must be a live handle and `out` writable.
 */
enum TautStatus taut_hurwitz_h(const struct TautHurwitz *value, char **out);

/**
 * `#Aut(alpha) · H`, the degree of the labeled Hurwitz class.
 *
 * # Safety
 * `value` must be a live handle and `out` writable.
 */
enum TautStatus taut_hurwitz_h_labeled(const struct TautHurwitz *value, char **out);

/**
 * Number of monodromy tuples, in decimal.
 *
 * # Safety
 * `value` must be a live handle and `out` writable.
 */
enum TautStatus taut_hurwitz_tuple_count(const struct TautHurwitz *value, char **out);

/**
 * # Safety
 * `value` must be a live handle and `out` writable.
 */
enum TautStatus taut_hurwitz_to_json(const struct TautHurwitz *value, char **out);

/**
 * # Safety
 * `value` must come from [`taut_hurwitz`] and not have been freed.
 */
void taut_hurwitz_free(struct TautHurwitz *value);

/**
 * Interpolates the Hodge integrals of `(genus, n)` from Hurwitz numbers.
 * `max_part` fixes the grid; 0 grows it until points are left to check.
 *
 * # Safety
 * `out` must be writable.
 */
enum TautStatus taut_hodge_interpolate(uint32_t genus,
                                       size_t n,
                                       uint32_t max_part,
                                       struct TautHodgeTable **out);

/**
 * Number of integrals in the table.
 *
 * # Safety
 * `table` must be a live handle and `out` writable.
 */
enum TautStatus taut_hodge_table_len(const struct TautHodgeTable *table, size_t *out);

/**
 * The integral of `psi_1^a_1 … psi_n^a_n lambda_k`, exponents in any order.
 * `NotFound` when the table has no such entry.
 *
 * # Safety
 * `table` must be a live handle, `a` must point to `len` values and `out`
 * must be writable.
 */
enum TautStatus taut_hodge_table_get(const struct TautHodgeTable *table,
                                     const uint32_t *a,
                                     size_t len,
                                     uint32_t k,
                                     char **out);

/**
 * # Safety
 * `table` must be a live handle and `out` writable.
 */
enum TautStatus taut_hodge_table_to_json(const struct TautHodgeTable *table, char **out);

/**
 * # Safety
 * `table` must come from [`taut_hodge_interpolate`] and not have been freed.
 */
void taut_hodge_table_free(struct TautHodgeTable *table);

/**
 * Checks both forms of ELSV at one profile against `table`; `*equal` is 1
 * when both hold.
 *
 * # Safety
 * `table` must be a live handle, `alpha` must point to `len` values and
 * `equal` must be writable.
 */
enum TautStatus taut_elsv_verify(uint32_t genus,
                                 const uint32_t *alpha,
                                 size_t len,
                                 const struct TautHodgeTable *table,
                                 int32_t *equal);

/**
 * Number of trivalent stable graphs of `(genus, n)` up to isomorphism.
 *
 * # Safety
 * `out` must be writable.
 */
enum TautStatus taut_top_strata_count(uint32_t genus, size_t n, size_t *out);

/**
 * The trivalent stable graphs of `(genus, n)` as a JSON array.
 *
 * # Safety
 * `out` must be writable.
 */
enum TautStatus taut_top_strata_json(uint32_t genus, size_t n, char **out);

/**
 * Number of classes of top strata connected by duality moves; the search
 * certificate is checked before returning.
 *
 * # Safety
 * `components` must be writable.
 */
enum TautStatus taut_connectivity(uint32_t genus, size_t n, size_t *components);

/**
 * The connectivity certificate as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum TautStatus taut_connectivity_json(uint32_t genus, size_t n, char **out);

/**
 * Degenerates every cover onto a chain of rational curves and returns the
 * stratum histogram as JSON. A histogram whose total disagrees with the
 * Hurwitz number is returned with status `Internal`.
 *
 * # Safety
 * `alpha` must point to `len` values and `out` must be writable.
 */
enum TautStatus taut_degenerate_json(uint32_t genus,
                                     const uint32_t *alpha,
                                     size_t len,
                                     uint64_t budget,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAUT_H */
