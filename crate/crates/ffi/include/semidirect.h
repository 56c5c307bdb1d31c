#ifndef SEMIDIRECT_H
#define SEMIDIRECT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  SD_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SD_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  SD_STATUS_INVALID_UTF8 = 2,
  /**
   * An input document did not match its schema.
   */
  SD_STATUS_PARSE_ERROR = 3,
  /**
   * The input parsed but is mathematically invalid (e.g. det ≠ ±1, a
   * violated relation, a non-injective endomorphism where one is needed).
   */
  SD_STATUS_INVALID_INPUT = 4,
  /**
   * Refutation does not apply (virtually nilpotent group or non-injective
   * endomorphism).
   */
  SD_STATUS_NOT_APPLICABLE = 5,
  /**
   * A certificate was parsed but failed verification.
   */
  SD_STATUS_CHECK_FAILED = 6,
  /**
   * An internal consistency check failed or a panic was caught.
   */
  SD_STATUS_INTERNAL = 7,
} SdStatus;

/**
 * A refutation certificate.
 */
typedef struct SdCertificate SdCertificate;

/**
 * A validated endomorphism together with its group.
 */
typedef struct SdEndo SdEndo;

/**
 * A group `Z^n ⋊_A Z`.
 */
typedef struct SdGroup SdGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, as a new string, or NULL
 * if the last call succeeded.
 */
char *sd_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void sd_string_free(char *s);

/**
 * Parses a matrix (`[["2","1"],["1","1"]]`) and builds its group.
 *
 * # Safety
 * `matrix_json` must be a NUL-terminated string; `out` must be writable.
 */
SdStatus sd_group_from_json(const char *matrix_json, SdGroup **out);

/**
 * # Safety
 * `g` must be NULL or a handle from [`sd_group_from_json`] not yet freed.
 */
void sd_group_free(SdGroup *g);

/**
 * Rank `n` of the translation subgroup, or 0 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live group handle.
 */
size_t sd_group_dim(const SdGroup *g);

/**
 * Decides virtual nilpotency. Writes the verdict document to
 * `verdict_json` (may be NULL) and the boolean answer to
 * `virtually_nilpotent` (may be NULL).
 *
 * # Safety
 * `g` must be a live group handle; non-NULL out pointers must be writable.
 */
SdStatus sd_group_classify(const SdGroup *g, char **verdict_json, bool *virtually_nilpotent);

/**
 * Parses an endomorphism document (`schema_version`, `matrix`, `x`, `t`) and
 * checks the defining relations.
 *
 * # Safety
 * `endo_json` must be a NUL-terminated string; `out` must be writable.
 */
SdStatus sd_endo_from_json(const char *endo_json, SdEndo **out);

/**
 * # Safety
 * `f` must be NULL or a handle from [`sd_endo_from_json`] not yet freed.
 */
void sd_endo_free(SdEndo *f);

/**
 * `[G : f(G)]` as a decimal string; `SD_STATUS_INVALID_INPUT` if `f` is not
 * injective and structured.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
SdStatus sd_endo_image_index(const SdEndo *f, char **out);

/**
 * Applies `f` to an element `{"v": [...], "z": "..."}`.
 *
 * # Safety
 * `f` must be a live handle, `element_json` NUL-terminated, `out` writable.
 */
SdStatus sd_endo_apply(const SdEndo *f, const char *element_json, char **out);

/**
 * Non-trivial fixed point of `f²` with the data used to construct it.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
SdStatus sd_endo_fixed_point(const SdEndo *f, char **out);

/**
 * Builds a certificate following `depth` preimages of the fixed point.
 * Returns `SD_STATUS_NOT_APPLICABLE` (and leaves `out` untouched) for
 * virtually nilpotent groups and non-injective endomorphisms.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
SdStatus sd_endo_refute(const SdEndo *f, size_t depth, SdCertificate **out);

/**
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
SdStatus sd_certificate_from_json(const char *json, SdCertificate **out);

/**
 * # Safety
 * `c` must be a live certificate handle; `out` must be writable.
 */
SdStatus sd_certificate_to_json(const SdCertificate *c, char **out);

/**
 * Verifies a certificate. Returns `SD_STATUS_OK` or `SD_STATUS_CHECK_FAILED`;
 * the report (`ok`, `diagnoses`) goes to `report_json` unless it is NULL.
 *
 * # Safety
 * `c` must be a live certificate handle; `report_json` NULL or writable.
 */
SdStatus sd_certificate_check(const SdCertificate *c, char **report_json);

/**
 * # Safety
 * `c` must be NULL or a certificate handle not yet freed.
 */
void sd_certificate_free(SdCertificate *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMIDIRECT_H */
