#ifndef DGBV_H
#define DGBV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Output encoding of polynomials.
 */
typedef enum DgbvFormat {
  /**
   * Canonical text form, e.g. `1/6*T0_1^3`.
   */
  DGBV_FORMAT_TEXT = 0,
  /**
   * JSON form `{"terms":[{"vars":[[n,i],...],"coeff":"p/q"}]}`.
   */
  DGBV_FORMAT_JSON = 1,
} DgbvFormat;

/**
 * The equations the verifier can check.
 */
typedef enum DgbvRelation {
  DGBV_RELATION_WDVV = 0,
  DGBV_RELATION_CONST = 1,
  DGBV_RELATION_STRING = 2,
  DGBV_RELATION_DILATON = 3,
  DGBV_RELATION_TRR0 = 4,
  DGBV_RELATION_TRR1 = 5,
  DGBV_RELATION_TRR2 = 6,
} DgbvRelation;

/**
 * Result code of every fallible call.
 */
typedef enum DgbvStatus {
  /**
   * Success.
   */
  DGBV_STATUS_OK = 0,
  /**
   * The call succeeded but the checked property does not hold (axioms or an equation).
   */
  DGBV_STATUS_CHECK_FAILED = 1,
  /**
   * A required pointer argument was null.
   */
  DGBV_STATUS_NULL_ARGUMENT = 2,
  /**
   * A string argument was not valid UTF-8, or an enum argument was out of range.
   */
  DGBV_STATUS_INVALID_ARGUMENT = 3,
  /**
   * An algebra or graph file could not be parsed.
   */
  DGBV_STATUS_PARSE_ERROR = 4,
  /**
   * The input parsed but violates a structural requirement.
   */
  DGBV_STATUS_MALFORMED_INPUT = 5,
  /**
   * The input is valid but outside what the engine supports.
   */
  DGBV_STATUS_UNSUPPORTED = 6,
  /**
   * The requested degree needs more leaves than the potential table holds.
   */
  DGBV_STATUS_BUDGET_EXCEEDED = 7,
  /**
   * A file could not be read.
   */
  DGBV_STATUS_IO_ERROR = 8,
  /**
   * An internal panic was caught at the boundary.
   */
  DGBV_STATUS_INTERNAL_ERROR = 9,
} DgbvStatus;

/**
 * An immutable cH-algebra.
 */
typedef struct DgbvAlgebra DgbvAlgebra;

/**
 * A cache of truncated potentials over one algebra.
 */
typedef struct DgbvTable DgbvTable;

/**
 * An equation checker with its own potential cache.
 */
typedef struct DgbvVerifier DgbvVerifier;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *dgbv_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void dgbv_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *dgbv_version(void);

/**
 * Opens a shipped algebra (`trivial`, `frobenius2`, `p2`, `hodge10`) or an algebra file.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum DgbvStatus dgbv_algebra_open(const char *source, struct DgbvAlgebra **out);

/**
 * Parses an algebra from the JSON algebra-file text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DgbvStatus dgbv_algebra_from_json(const char *json, struct DgbvAlgebra **out);

/**
 * Releases an algebra. Null is ignored.
 *
 * # Safety
 * `alg` must be null or a live handle from this library.
 */
void dgbv_algebra_free(struct DgbvAlgebra *alg);

/**
 * Dimension of the algebra, or 0 for a null handle.
 *
 * # Safety
 * `alg` must be null or a live handle.
 */
size_t dgbv_algebra_dim(const struct DgbvAlgebra *alg);

/**
 * Checks the algebra axioms. Writes the JSON report to `report` when it is
 * non-null; returns `DGBV_STATUS_OK` iff every axiom holds, else `DGBV_STATUS_CHECK_FAILED`.
 *
 * # Safety
 * `alg` must be a live handle; `report` must be null or writable.
 */
enum DgbvStatus dgbv_check_axioms(const struct DgbvAlgebra *alg, char **report);

/**
 * Evaluates one marked graph (JSON graph-file text) over the algebra.
 *
 * # Safety
 * `alg` must be a live handle, `graph_json` NUL-terminated, `out` writable.
 */
enum DgbvStatus dgbv_evaluate_graph(const struct DgbvAlgebra *alg,
                                    const char *graph_json,
                                    uint32_t format,
                                    char **out);

/**
 * Creates a potential table holding graphs with up to `max_leaves` empty leaves.
 *
 * # Safety
 * `alg` must be a live handle; `out` writable. The table does not borrow `alg`.
 */
enum DgbvStatus dgbv_table_new(const struct DgbvAlgebra *alg,
                               size_t max_leaves,
                               struct DgbvTable **out);

/**
 * Releases a table. Null is ignored.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
void dgbv_table_free(struct DgbvTable *table);

/**
 * The potential F_{genus,n} truncated to `max_leaves` empty leaves
 * (n = 0 gives the small-phase-space potential).
 *
 * # Safety
 * `table` must be a live handle not used concurrently; `out` writable.
 */
enum DgbvStatus dgbv_table_potential(struct DgbvTable *table,
                                     size_t genus,
                                     uint32_t n,
                                     size_t max_leaves,
                                     uint32_t format,
                                     char **out);

/**
 * Creates an equation checker over the algebra.
 *
 * # Safety
 * `alg` must be a live handle; `out` writable.
 */
enum DgbvStatus dgbv_verifier_new(const struct DgbvAlgebra *alg, struct DgbvVerifier **out);

/**
 * Releases a verifier. Null is ignored.
 *
 * # Safety
 * `verifier` must be null or a live handle.
 */
void dgbv_verifier_free(struct DgbvVerifier *verifier);

/**
 * Checks one equation (a `DgbvRelation` value) up to total degree `degree`.
 * Writes the JSON residual report to `report` when non-null; returns
 * `DGBV_STATUS_OK` if the equation holds and `DGBV_STATUS_CHECK_FAILED` otherwise.
 *
 * # Safety
 * `verifier` must be a live handle not used concurrently; `report` null or writable.
 */
enum DgbvStatus dgbv_verify(struct DgbvVerifier *verifier,
                            uint32_t relation,
                            size_t genus,
                            uint32_t n,
                            uint32_t degree,
                            char **report);

/**
 * The KdV one-point coefficient of T_{0}^k T_{m} in F_genus, as "p/q".
 *
 * # Safety
 * `out` must be writable.
 */
enum DgbvStatus dgbv_kdv_coefficient(uint32_t genus, uint32_t m, uint32_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGBV_H */
