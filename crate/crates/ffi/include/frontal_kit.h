#ifndef FRONTAL_KIT_H
#define FRONTAL_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FkNormalForm {
  FK_NORMAL_FORM_CUSPIDAL_EDGE = 0,
  FK_NORMAL_FORM_SWALLOWTAIL = 1,
  FK_NORMAL_FORM_FOLDED_UMBRELLA = 2,
  FK_NORMAL_FORM_OPEN_SWALLOWTAIL = 3,
  FK_NORMAL_FORM_OPEN_FOLDED_UMBRELLA = 4,
  FK_NORMAL_FORM_WHITNEY_CUSP = 5,
  FK_NORMAL_FORM_FOLD = 6,
  FK_NORMAL_FORM_MOND_SURFACE = 7,
} FkNormalForm;

typedef enum FkSingularity {
  FK_SINGULARITY_REGULAR = 0,
  FK_SINGULARITY_FOLD = 1,
  FK_SINGULARITY_CUSPIDAL_EDGE = 2,
  FK_SINGULARITY_FOLDED_UMBRELLA = 3,
  FK_SINGULARITY_WHITNEY_CUSP = 4,
  FK_SINGULARITY_SWALLOWTAIL = 5,
  FK_SINGULARITY_OPEN_SWALLOWTAIL = 6,
  FK_SINGULARITY_OPENING_OF_FOLD = 7,
  FK_SINGULARITY_OPENING_OF_WHITNEY_CUSP = 8,
  FK_SINGULARITY_DEGENERATE = 9,
  FK_SINGULARITY_UNRECOGNIZED = 10,
} FkSingularity;

typedef enum FkStatus {
  FK_STATUS_OK = 0,
  /**
   * Null pointer, invalid UTF-8 or a buffer that is too small.
   */
  FK_STATUS_INVALID_ARGUMENT = 1,
  FK_STATUS_PARSE = 2,
  /**
   * The input does not satisfy the operation's preconditions.
   */
  FK_STATUS_PRECONDITION = 3,
  FK_STATUS_INTERNAL = 4,
} FkStatus;

/**
 * Opaque germ handle.
 */
typedef struct FkGerm FkGerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *fk_last_error_message(void);

/**
 * Parses germ DSL text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FkStatus fk_germ_parse(const char *text, struct FkGerm **out);

/**
 * # Safety
 * `germ` must be null or a handle from this library that was not freed.
 */
void fk_germ_free(struct FkGerm *germ);

/**
 * Canonical DSL text of a germ.
 *
 * # Safety
 * `germ` must be a live handle and `out` a valid pointer.
 */
enum FkStatus fk_germ_to_string(const struct FkGerm *germ, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library that was not freed.
 */
void fk_string_free(char *s);

/**
 * Catalog normal form in `R^m`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum FkStatus fk_normal_form(enum FkNormalForm form, size_t m, struct FkGerm **out);

/**
 * Tangent surface of a curve germ.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum FkStatus fk_tangent_surface(const struct FkGerm *curve, struct FkGerm **out);

/**
 * Class of a surface germ at its base point, flat ambient connection.
 *
 * # Safety
 * `germ` must be a live handle and `out` a valid pointer.
 */
enum FkStatus fk_classify_surface(const struct FkGerm *germ, enum FkSingularity *out);

/**
 * Type `(a_1, ..., a_m)` of a curve germ at 0, derivatives up to `cutoff`.
 * Writes up to `cap` entries to `out` and the full length to `len`; a
 * buffer shorter than the type gives `InvalidArgument` with `len` set.
 *
 * # Safety
 * `out` must hold `cap` entries (or be null when `cap` is 0), `len` must be valid.
 */
enum FkStatus fk_curve_type(const struct FkGerm *curve,
                            uint32_t cutoff,
                            uint32_t *out,
                            size_t cap,
                            size_t *len);

/**
 * JSON report (schema 1) as produced by `frontal-kit analyze`.
 *
 * # Safety
 * `germ` must be a live handle and `out` a valid pointer.
 */
enum FkStatus fk_analyze_json(const struct FkGerm *germ, char **out);

/**
 * Whether `h` (text over the germ's source variables) lies in the
 * ramification module of `f`, truncated at degree `k`.
 *
 * # Safety
 * `f` must be a live handle, `h` a NUL-terminated string, `out` a valid pointer.
 */
enum FkStatus fk_openings_member(const struct FkGerm *f, const char *h, uint32_t k, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRONTAL_KIT_H */
