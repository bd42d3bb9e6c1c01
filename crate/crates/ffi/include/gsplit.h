#ifndef GSPLIT_H
#define GSPLIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Value written by [`gs_group_ends`] for infinitely many ends.
 */
#define GS_ENDS_INFINITE -1

typedef enum GsFamily {
  GS_FAMILY_FREE = 0,
  GS_FAMILY_FREE_ABELIAN = 1,
  GS_FAMILY_SURFACE = 2,
} GsFamily;

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_ERROR = 1,
  /**
   * The answer is undecided at the configured truncation.
   */
  GS_STATUS_INCONCLUSIVE = 2,
  GS_STATUS_NULL_POINTER = 3,
  GS_STATUS_INVALID_UTF8 = 4,
  GS_STATUS_PANIC = 5,
} GsStatus;

typedef enum GsTri {
  GS_TRI_NO = 0,
  GS_TRI_YES = 1,
  GS_TRI_INCONCLUSIVE = 2,
} GsTri;

/**
 * A finitely presented group from one of the supported families.
 */
typedef struct GsGroup GsGroup;

/**
 * A parsed instance file: a group with named subgroups and sets.
 */
typedef struct GsInstance GsInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread. Valid until the next call
 * into the library from the same thread; never null.
 */
const char *gs_last_error(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void gs_string_free(char *s);

/**
 * Creates `F_n`, `ℤ^n` or the closed surface group of genus `n`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GsStatus gs_group_new(enum GsFamily family, uint32_t n, struct GsGroup **out);

/**
 * # Safety
 * `g` must come from [`gs_group_new`], or be null.
 */
void gs_group_free(struct GsGroup *g);

/**
 * Canonical form of `word`, e.g. `aB` or `(1,-2)`.
 *
 * # Safety
 * `g` must be a live handle, `word` a NUL-terminated string, `out` valid.
 */
enum GsStatus gs_group_normal_form(const struct GsGroup *g, const char *word, char **out);

/**
 * Number of elements of word length at most `radius`.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
enum GsStatus gs_ball_size(const struct GsGroup *g, uint32_t radius, uint64_t *out);

/**
 * Number of ends, or [`GS_ENDS_INFINITE`].
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
enum GsStatus gs_group_ends(const struct GsGroup *g, int32_t *out);

/**
 * Parses the text of an instance file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid.
 */
enum GsStatus gs_instance_parse(const char *text, struct GsInstance **out);

/**
 * # Safety
 * `inst` must come from [`gs_instance_parse`], or be null.
 */
void gs_instance_free(struct GsInstance *inst);

/**
 * Whether `word` lies in the named subgroup. Exact in free and free
 * abelian groups; surface groups may answer [`GsTri::Inconclusive`].
 *
 * # Safety
 * `inst` must be a live handle, the strings NUL-terminated, `out` valid.
 */
enum GsStatus gs_subgroup_member(const struct GsInstance *inst,
                                 const char *subgroup,
                                 const char *word,
                                 enum GsTri *out);

/**
 * Almost malnormality of a subgroup of a free group. When the answer is
 * no and `witness` is non-null, a conjugator `g ∉ H` with `H ∩ gHg⁻¹`
 * infinite is written there.
 *
 * # Safety
 * `inst` must be a live handle, `subgroup` NUL-terminated, `out` valid;
 * `witness` may be null.
 */
enum GsStatus gs_subgroup_malnormal(const struct GsInstance *inst,
                                    const char *subgroup,
                                    enum GsTri *out,
                                    char **witness);

/**
 * Runs a `gsplit` command line (without the program name) and captures
 * its standard output. The status mirrors the command's exit code;
 * anything written to standard error becomes the last error message.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings and `out` be valid.
 */
enum GsStatus gs_run_command(const char *const *argv, size_t argc, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSPLIT_H */
