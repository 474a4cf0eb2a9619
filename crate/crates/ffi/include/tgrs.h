#ifndef TGRS_H
#define TGRS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TgrsStatus {
  TGRS_STATUS_OK = 0,
  TGRS_STATUS_NULL_POINTER = 1,
  TGRS_STATUS_INVALID_ARGUMENT = 2,
  TGRS_STATUS_GUARD_EXCEEDED = 3,
  TGRS_STATUS_PRECONDITION_FAILED = 4,
  TGRS_STATUS_INVARIANT_VIOLATED = 5,
  TGRS_STATUS_BUFFER_TOO_SMALL = 6,
  TGRS_STATUS_PANIC = 7,
} TgrsStatus;

// GRS classification of an MDS test.
typedef enum TgrsGrsStatus {
  TGRS_GRS_STATUS_NOT_MDS = 0,
  TGRS_GRS_STATUS_GRS = 1,
  TGRS_GRS_STATUS_NON_GRS_MDS = 2,
} TgrsGrsStatus;

// Census size limits: 10^6, 10^8 and 10^10 candidates.
typedef enum TgrsTier {
  TGRS_TIER_QUICK = 0,
  TGRS_TIER_STANDARD = 1,
  TGRS_TIER_LONG = 2,
} TgrsTier;

// Opaque code handle.
typedef struct TgrsCode TgrsCode;

// Opaque finite field handle.
typedef struct TgrsField TgrsField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library on the same thread.
const char *tgrs_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *tgrs_version(void);

// Creates GF(p^m). `modulus` (constant first, monic, length m+1) may be
// NULL to use the default primitive modulus.
//
// # Safety
// `modulus` must point to `modulus_len` values when non-null; `out` must be
// a valid pointer.
enum TgrsStatus tgrs_field_new(uint64_t p,
                               uint32_t m,
                               const uint64_t *modulus,
                               size_t modulus_len,
                               struct TgrsField **out);

// # Safety
// `field` must come from [`tgrs_field_new`] and not be used afterwards.
void tgrs_field_free(struct TgrsField *field);

// Number of elements, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
uint32_t tgrs_field_order(const struct TgrsField *field);

// `a * b` on element indices.
//
// # Safety
// `field` must be a live handle and `out` valid.
enum TgrsStatus tgrs_field_mul(const struct TgrsField *field,
                               uint32_t a,
                               uint32_t b,
                               uint32_t *out);

// Creates a TGRS code of length `n` and dimension `k`.
//
// `alpha` holds `n` distinct evaluation points. `nu` holds `n` nonzero
// column multipliers, or is NULL for all ones. `b` is the row-major
// `k x (n-k)` coefficient matrix, or NULL for zero.
//
// # Safety
// Pointers must be null where allowed or reference arrays of the stated sizes.
enum TgrsStatus tgrs_code_new(const struct TgrsField *field,
                              size_t n,
                              size_t k,
                              const uint32_t *alpha,
                              const uint32_t *nu,
                              const uint32_t *b,
                              struct TgrsCode **out);

// # Safety
// `code` must come from [`tgrs_code_new`] and not be used afterwards.
void tgrs_code_free(struct TgrsCode *code);

// MDS test. When the code is not MDS and `witness` is non-null, the first
// failing k-subset (0-based, lexicographic) is written to `witness[0..k]`.
//
// # Safety
// `code` live; `is_mds` valid; `witness` null or `k` writable entries.
enum TgrsStatus tgrs_code_is_mds(const struct TgrsCode *code, bool *is_mds, size_t *witness);

// Writes the row-major `k x n` generator matrix.
//
// # Safety
// `code` live; `out` holds `len` entries.
enum TgrsStatus tgrs_code_generator(const struct TgrsCode *code, uint32_t *out, size_t len);

// Writes the row-major `(n-k) x n` parity-check matrix.
//
// # Safety
// `code` live; `out` holds `len` entries.
enum TgrsStatus tgrs_code_parity_check(const struct TgrsCode *code, uint32_t *out, size_t len);

// # Safety
// `code` live; `out` valid.
enum TgrsStatus tgrs_code_grs_status(const struct TgrsCode *code, enum TgrsGrsStatus *out);

// # Safety
// `code` live; `out` valid.
enum TgrsStatus tgrs_code_schur_dim(const struct TgrsCode *code, size_t *out);

// Whether `n = 2k` and `G G^T = 0`.
//
// # Safety
// `code` live; `out` valid.
enum TgrsStatus tgrs_code_is_selfdual(const struct TgrsCode *code, bool *out);

// Counts assignments of the wildcard cells of `pattern` giving MDS codes.
//
// `pattern` is row-major `k x (n-k)`; a negative entry is a wildcard,
// anything else an element index. `threads = 0` uses all cores.
//
// # Safety
// Arrays must have the stated sizes; `count` valid.
enum TgrsStatus tgrs_census_count(const struct TgrsField *field,
                                  size_t n,
                                  size_t k,
                                  const uint32_t *alpha,
                                  const int64_t *pattern,
                                  size_t threads,
                                  enum TgrsTier tier,
                                  uint64_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TGRS_H */
