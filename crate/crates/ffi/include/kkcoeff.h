#ifndef KKCOEFF_H
#define KKCOEFF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KkStatus {
  KK_STATUS_OK = 0,
  // The report was produced and at least one check failed.
  KK_STATUS_CHECK_FAILED = 1,
  // The report was produced and a biconditional was violated.
  KK_STATUS_VIOLATION = 2,
  // Null pointer, bad UTF-8, or a parameter out of range.
  KK_STATUS_INVALID_ARGUMENT = 3,
  // Malformed JSON, theory, catalog or sample data.
  KK_STATUS_INVALID_INPUT = 4,
  // The computation itself failed.
  KK_STATUS_COMPUTE_ERROR = 5,
  KK_STATUS_PANIC = 6,
} KkStatus;

// Opaque catalog handle.
typedef struct KkCatalog KkCatalog;

// Opaque theory handle.
typedef struct KkTheory KkTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *kk_version(void);

// Message of the last failed call on this thread, or NULL. Valid until the
// next call into this library on the same thread.
const char *kk_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void kk_string_free(char *s);

// # Safety
// `out` must be a valid pointer.
enum KkStatus kk_catalog_builtin(struct KkCatalog **out);

// Catalog from a JSON array of entries.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum KkStatus kk_catalog_from_json(const char *json, struct KkCatalog **out);

// Number of entries, 0 for NULL.
//
// # Safety
// `catalog` must be NULL or a live handle.
size_t kk_catalog_len(const struct KkCatalog *catalog);

// Name of entry `index`, as a string to release with `kk_string_free`.
//
// # Safety
// `catalog` must be a live handle and `out` a valid pointer.
enum KkStatus kk_catalog_name(const struct KkCatalog *catalog, size_t index, char **out);

// Theory for an entry name, `cuntz:N` or `C_q(N)`.
//
// # Safety
// `catalog` must be a live handle, `name` a NUL-terminated string and `out` a valid pointer.
enum KkStatus kk_catalog_resolve(const struct KkCatalog *catalog,
                                 const char *name,
                                 struct KkTheory **out);

// # Safety
// `catalog` must be NULL or a handle not yet freed.
void kk_catalog_free(struct KkCatalog *catalog);

// Theory from a single catalog-entry JSON object.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum KkStatus kk_theory_from_json(const char *json, struct KkTheory **out);

// # Safety
// `theory` must be a live handle and `out` a valid pointer.
enum KkStatus kk_theory_to_json(const struct KkTheory *theory, char **out);

// # Safety
// `theory` must be NULL or a handle not yet freed.
void kk_theory_free(struct KkTheory *theory);

// Coefficient groups of `theory` for `coeff` (`mod:Q`, `torsion` or
// `rational`), as a JSON report.
//
// # Safety
// `theory` must be a live handle, `coeff` a NUL-terminated string and `out` a valid pointer.
enum KkStatus kk_compute(const struct KkTheory *theory, const char *coeff, char **out);

// Run verification suites. `options` is NULL or a JSON object with any of
// `suite`, `entry`, `q_max`, `p_max`, `profile_bound`, `seed`, `random`,
// `samples`; omitted keys take the command-line defaults.
//
// # Safety
// `catalog` must be a live handle, `options` NULL or a NUL-terminated string,
// and `out` a valid pointer.
enum KkStatus kk_verify(const struct KkCatalog *catalog, const char *options, char **out);

// Equivalence biconditionals for a transformation sample given as JSON.
// Returns `KK_STATUS_VIOLATION` with the report written when one fails.
//
// # Safety
// `sample` must be a NUL-terminated string and `out` a valid pointer.
enum KkStatus kk_check_transform(const char *sample, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KKCOEFF_H */
