/* C interface to the graphlink library. */

#ifndef GRAPHLINK_H
#define GRAPHLINK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every C-ABI call.
 */
typedef enum graphlink_status {
  GRAPHLINK_OK = 0,
  GRAPHLINK_ERROR = 1,
  GRAPHLINK_PARSE_ERROR = 2,
  GRAPHLINK_PRECONDITION = 3,
  GRAPHLINK_NULL_ARGUMENT = 5,
  GRAPHLINK_INVALID_UTF8 = 6,
} graphlink_status;

/**
 * Opaque handle to a parsed group presentation.
 */
typedef struct graphlink_group graphlink_group;

/**
 * Opaque handle to a parsed permutation representation.
 */
typedef struct graphlink_rep graphlink_rep;

/**
 * Opaque handle to a parsed splice diagram.
 */
typedef struct graphlink_splice graphlink_splice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last error on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *graphlink_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a graphlink function and not freed yet.
 */
void graphlink_string_free(char *s);

/**
 * Parse a splice diagram from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum graphlink_status graphlink_splice_parse(const char *text, struct graphlink_splice **out);

/**
 * # Safety
 * `handle` must come from `graphlink_splice_parse` and not be freed twice.
 */
void graphlink_splice_free(struct graphlink_splice *handle);

/**
 * Number of link components (arrowhead vertices).
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum graphlink_status graphlink_splice_components(const struct graphlink_splice *handle,
                                                  uintptr_t *out);

/**
 * Multivariable Alexander polynomial in text form.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum graphlink_status graphlink_splice_alexander(const struct graphlink_splice *handle, char **out);

/**
 * Thurston norm of a class (`phi` has one entry per component).
 *
 * # Safety
 * `handle` and `out` must be valid; `phi` must point to `len` values.
 */
enum graphlink_status graphlink_splice_thurston_norm(const struct graphlink_splice *handle,
                                                     const int64_t *phi,
                                                     uintptr_t len,
                                                     int64_t *out);

/**
 * Whether the class fibers: writes 1 or 0.
 *
 * # Safety
 * `handle` and `out` must be valid; `phi` must point to `len` values.
 */
enum graphlink_status graphlink_splice_is_fibered(const struct graphlink_splice *handle,
                                                  const int64_t *phi,
                                                  uintptr_t len,
                                                  int32_t *out);

/**
 * Genus of a knot diagram.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum graphlink_status graphlink_splice_genus(const struct graphlink_splice *handle, int64_t *out);

/**
 * Single-variable polynomial of a class on a link.
 *
 * # Safety
 * `handle` and `out` must be valid; `phi` must point to `len` values.
 */
enum graphlink_status graphlink_splice_specialize(const struct graphlink_splice *handle,
                                                  const int64_t *phi,
                                                  uintptr_t len,
                                                  char **out);

/**
 * Parse a group presentation from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum graphlink_status graphlink_group_parse(const char *text, struct graphlink_group **out);

/**
 * # Safety
 * `handle` must come from `graphlink_group_parse` and not be freed twice.
 */
void graphlink_group_free(struct graphlink_group *handle);

/**
 * Number of generators.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum graphlink_status graphlink_group_num_generators(const struct graphlink_group *handle,
                                                     uintptr_t *out);

/**
 * Free rank of the abelianization.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum graphlink_status graphlink_group_rank(const struct graphlink_group *handle, uintptr_t *out);

/**
 * Express a class on the H1 basis as a character on the generators:
 * writes one value per generator into `out` (`out_len` must equal the
 * generator count).
 *
 * # Safety
 * `handle` must be valid; `phi` must point to `len` values; `out` must
 * point to `out_len` writable values.
 */
enum graphlink_status graphlink_group_character(const struct graphlink_group *handle,
                                                const int64_t *phi,
                                                uintptr_t len,
                                                int64_t *out,
                                                uintptr_t out_len);

/**
 * Parse a representation from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum graphlink_status graphlink_rep_parse(const char *text, struct graphlink_rep **out);

/**
 * # Safety
 * `handle` must come from `graphlink_rep_parse` and not be freed twice.
 */
void graphlink_rep_free(struct graphlink_rep *handle);

/**
 * Whether the representation respects every relator: writes 1 or 0.
 *
 * # Safety
 * All pointers must be valid.
 */
enum graphlink_status graphlink_rep_respects(const struct graphlink_group *group,
                                             const struct graphlink_rep *rep,
                                             int32_t *out);

/**
 * Twisted Alexander polynomial at one prime, in text form. `chi` is the
 * character, one value per generator. With `tilde` nonzero the secondary
 * polynomial (the product of the torsion invariants) is returned instead.
 *
 * # Safety
 * All pointers must be valid; `chi` must point to `len` values.
 */
enum graphlink_status graphlink_twisted_delta(const struct graphlink_group *group,
                                              const struct graphlink_rep *rep,
                                              const int64_t *chi,
                                              uintptr_t len,
                                              uint64_t prime,
                                              int32_t tilde,
                                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHLINK_H */
