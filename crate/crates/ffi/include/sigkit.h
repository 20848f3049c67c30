#ifndef SIGKIT_H
#define SIGKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum SigkitStatus {
  SIGKIT_STATUS_OK = 0,
  SIGKIT_STATUS_NULL_ARGUMENT = 1,
  SIGKIT_STATUS_INVALID_UTF8 = 2,
  SIGKIT_STATUS_INVALID_INPUT = 3,
  SIGKIT_STATUS_IO = 4,
  SIGKIT_STATUS_PANIC = 5,
} SigkitStatus;

/**
 * Lexicon, brand map and equivalence classes used by the parse and expand calls.
 */
typedef struct SigkitToolkit SigkitToolkit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Toolkit with the shipped lexicons. Never returns null.
 */
struct SigkitToolkit *sigkit_toolkit_new_default(void);

/**
 * Toolkit from JSON files; a null path selects the shipped resource.
 *
 * # Safety
 * Paths must be null or valid NUL-terminated strings; `out` must be writable.
 */
enum SigkitStatus sigkit_toolkit_from_files(const char *lexicon_path,
                                            const char *brand_map_path,
                                            const char *equivalence_path,
                                            struct SigkitToolkit **out);

/**
 * # Safety
 * `tk` must be null or a pointer from a toolkit constructor, freed at most once.
 */
void sigkit_toolkit_free(struct SigkitToolkit *tk);

/**
 * Annotations for `text` as a JSON array.
 *
 * # Safety
 * `tk` must be a live toolkit, `text` a valid string and `out_json` writable.
 */
enum SigkitStatus sigkit_parse(const struct SigkitToolkit *tk, const char *text, char **out_json);

/**
 * Parse then expand `text`; JSON object with `record` and `provenance`.
 *
 * # Safety
 * As for [`sigkit_parse`].
 */
enum SigkitStatus sigkit_expand(const struct SigkitToolkit *tk, const char *text, char **out_json);

/**
 * Parse `text` and render its 10-column table row as JSON.
 *
 * # Safety
 * As for [`sigkit_parse`].
 */
enum SigkitStatus sigkit_table_row(const struct SigkitToolkit *tk,
                                   const char *text,
                                   char **out_json);

/**
 * Whether two strings are equivalent under the toolkit's equivalence classes.
 *
 * # Safety
 * `tk` must be a live toolkit, `a` and `b` valid strings and `out` writable.
 */
enum SigkitStatus sigkit_equivalent(const struct SigkitToolkit *tk,
                                    const char *a,
                                    const char *b,
                                    bool *out);

/**
 * Exact two-sided binomial interval.
 *
 * # Safety
 * `low` and `high` must be writable.
 */
enum SigkitStatus sigkit_clopper_pearson(uint64_t successes,
                                         uint64_t n,
                                         double confidence,
                                         double *low,
                                         double *high);

/**
 * Precision, recall and F1 from match counts; empty denominators give 0.
 *
 * # Safety
 * The three output pointers must be writable.
 */
enum SigkitStatus sigkit_prf(uint64_t tp,
                             uint64_t fp,
                             uint64_t fn_count,
                             double *precision,
                             double *recall,
                             double *f1);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void sigkit_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *sigkit_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *sigkit_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGKIT_H */
