#ifndef PIC_H
#define PIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call. `PIC_STATUS_OK` and `PIC_STATUS_NO` answer yes/no
 * questions; negative values are errors.
 */
typedef enum PicStatus {
  PIC_STATUS_OK = 0,
  /**
   * The property does not hold (infeasible, violation, none found).
   */
  PIC_STATUS_NO = 1,
  PIC_STATUS_NULL_ARGUMENT = -1,
  PIC_STATUS_UTF8 = -2,
  PIC_STATUS_PARSE = -3,
  PIC_STATUS_INVALID = -4,
  PIC_STATUS_DIMENSION = -5,
  PIC_STATUS_TOO_LARGE = -6,
  PIC_STATUS_INFEASIBLE = -7,
  PIC_STATUS_PANIC = -8,
} PicStatus;

/**
 * Side-information graph.
 */
typedef struct PicGraph PicGraph;

/**
 * Linear scheme over a prime field.
 */
typedef struct PicScheme PicScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *pic_version(void);

/**
 * Message of the last failed call on this thread, valid until the next call.
 */
const char *pic_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void pic_string_free(char *s);

/**
 * Parses `{"n": N, "side_info": [[...], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PicStatus pic_graph_from_json(const char *json, struct PicGraph **out);

/**
 * # Safety
 * `g` must come from this library or be null.
 */
void pic_graph_free(struct PicGraph *g);

/**
 * Number of users, 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t pic_graph_users(const struct PicGraph *g);

/**
 * Parses a scheme file (`q`, `n`, `r`, `G`, `keys`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PicStatus pic_scheme_from_json(const char *json, struct PicScheme **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void pic_scheme_free(struct PicScheme *s);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PicStatus pic_scheme_to_json(const struct PicScheme *s, char **out);

/**
 * Rate tuple `{"R": .., "key_rates": {..}}` of a scheme.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PicStatus pic_scheme_rate(const struct PicScheme *s, char **out);

/**
 * `PIC_STATUS_OK` if the comma-separated structure is feasible, otherwise
 * `PIC_STATUS_NO` with the 1-based witness pair in `witness[0..2]` (when
 * `witness` is not null).
 *
 * # Safety
 * `g` must be a live handle, `ks` a NUL-terminated string, `witness` null or
 * two writable `size_t`.
 */
enum PicStatus pic_is_feasible(const struct PicGraph *g, const char *ks, size_t *witness);

/**
 * One-time-pad scheme for a feasible structure; `PIC_STATUS_INFEASIBLE`
 * otherwise.
 *
 * # Safety
 * `g` must be a live handle, `ks` a NUL-terminated string, `out` writable.
 */
enum PicStatus pic_canonical_scheme(const struct PicGraph *g,
                                    const char *ks,
                                    struct PicScheme **out);

/**
 * Linear private-scheme verifier. `reason` (nullable) receives the verdict
 * text, e.g. `privacy_violation(user 3)`.
 *
 * # Safety
 * `s`, `g` must be live handles; `reason` null or writable.
 */
enum PicStatus pic_verify_private(const struct PicScheme *s,
                                  const struct PicGraph *g,
                                  char **reason);

/**
 * Linear weak-privacy verifier for keyless schemes.
 *
 * # Safety
 * As for [`pic_verify_private`].
 */
enum PicStatus pic_verify_weak_private(const struct PicScheme *s,
                                       const struct PicGraph *g,
                                       char **reason);

/**
 * Exhaustive decodability and zero-leakage check. `state_limit = 0` uses
 * `PIC_STATE_LIMIT` or the built-in default.
 *
 * # Safety
 * `s`, `g` must be live handles.
 */
enum PicStatus pic_oracle_check_private(const struct PicScheme *s,
                                        const struct PicGraph *g,
                                        uint64_t state_limit);

/**
 * Minimum sum key rate under the pair (and optionally triple) constraints,
 * as an exact rational string.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum PicStatus pic_keyrate_lp(const struct PicGraph *g, bool triples, char **out);

/**
 * Fractional chromatic number of the conflict graph.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum PicStatus pic_fractional_chromatic(const struct PicGraph *g, char **out);

/**
 * Minimum normalized number of private multicast sessions.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum PicStatus pic_multicast_min_sessions(const struct PicGraph *g, char **out);

/**
 * Secure clique cover as a JSON list of 1-based blocks, or `PIC_STATUS_NO`.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum PicStatus pic_secure_clique_cover(const struct PicGraph *g, char **out);

/**
 * Polymatroidal outer bound at a rate tuple given as JSON. `PIC_STATUS_NO`
 * means the tuple is certifiably not achievable.
 *
 * # Safety
 * `g` must be a live handle; `rates` a NUL-terminated string.
 */
enum PicStatus pic_polymatroid_check(const struct PicGraph *g, const char *rates, bool exhaustive);

/**
 * Runs a command-line invocation (`argv[0]` is the program name) and returns
 * its exit code; the report is stored in `*out` when `out` is not null.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings.
 */
int pic_run(int argc, const char *const *argv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PIC_H */
