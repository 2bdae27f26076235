#ifndef DLCODES_H
#define DLCODES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DlcStatus {
  DLC_STATUS_OK = 0,
  DLC_STATUS_NULL_POINTER = 1,
  DLC_STATUS_INVALID_ARGUMENT = 2,
  DLC_STATUS_PARSE = 3,
  DLC_STATUS_IO = 4,
  DLC_STATUS_HYPOTHESIS_VIOLATION = 5,
  DLC_STATUS_RANK_DEFICIENT = 6,
  DLC_STATUS_BUDGET_EXCEEDED = 7,
  DLC_STATUS_UNSUPPORTED = 8,
  DLC_STATUS_PANIC = 9,
} DlcStatus;

/**
 * A linear code with its generator matrix and column labels.
 */
typedef struct DlcCode DlcCode;

/**
 * A finite field GF(p^m).
 */
typedef struct DlcField DlcField;

/**
 * Parameters from the closed-form corollaries.
 */
typedef struct DlcParams {
  int64_t n;
  int64_t k;
  int64_t d_lower;
  /**
   * 1 when every hypothesis of the corollary holds.
   */
  uint8_t hypotheses_hold;
} DlcParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *dlc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dlc_version(void);

/**
 * GF(p^m) with the canonical modulus.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum DlcStatus dlc_field_new(uint32_t p, uint32_t m, struct DlcField **out);

/**
 * Field from a descriptor such as `2^2/111`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum DlcStatus dlc_field_from_descriptor(const char *descriptor, struct DlcField **out);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint32_t dlc_field_order(const struct DlcField *field);

/**
 * Binary operation on element codes: 0 add, 1 subtract, 2 multiply, 3 divide.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
enum DlcStatus dlc_field_op(const struct DlcField *field,
                            uint32_t op,
                            uint32_t a,
                            uint32_t b,
                            uint32_t *out);

/**
 * # Safety
 * `field` must be null or a handle not yet freed.
 */
void dlc_field_free(struct DlcField *field);

/**
 * A2 parameters for `V_i = O(n_i H - sum_j m_{i,j} B_j)`; the arrays give the
 * multiplicities at the first points in canonical order.
 *
 * # Safety
 * `m1`/`m2` must point to `len1`/`len2` readable values (or be null with
 * length 0); `out` must be writable.
 */
enum DlcStatus dlc_params_a2(uint64_t q,
                             uint32_t b,
                             uint32_t n1,
                             uint32_t n2,
                             const uint32_t *m1,
                             size_t len1,
                             const uint32_t *m2,
                             size_t len2,
                             struct DlcParams *out);

/**
 * 2A4 parameters for `V_i` pulled back from `O(t_i)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum DlcStatus dlc_params_2a4(uint64_t q,
                              uint32_t b,
                              uint32_t t1,
                              uint32_t t2,
                              struct DlcParams *out);

/**
 * Builds the A2 code over GF(q) (q prime), enforcing the hypotheses.
 *
 * # Safety
 * As for [`dlc_params_a2`], with `out` writable for a handle.
 */
enum DlcStatus dlc_code_build_a2(uint64_t q,
                                 uint32_t b,
                                 uint32_t n1,
                                 uint32_t n2,
                                 const uint32_t *m1,
                                 size_t len1,
                                 const uint32_t *m2,
                                 size_t len2,
                                 struct DlcCode **out);

/**
 * Builds the 2A4 proxy code over GF(q^2), evaluated on `Z` rather than the surface.
 *
 * # Safety
 * `out` must be writable.
 */
enum DlcStatus dlc_code_build_2a4_proxy(uint64_t q,
                                        uint32_t b,
                                        uint32_t t1,
                                        uint32_t t2,
                                        struct DlcCode **out);

/**
 * Reads a matrix file (and, if `labels_path` is non-null, its label sidecar).
 *
 * # Safety
 * Paths must be NUL-terminated strings (`labels_path` may be null); `out` writable.
 */
enum DlcStatus dlc_code_read(const char *path, const char *labels_path, struct DlcCode **out);

/**
 * Writes the matrix file and, if `labels_path` is non-null, the label sidecar.
 *
 * # Safety
 * `code` must be a live handle; paths as in [`dlc_code_read`].
 */
enum DlcStatus dlc_code_write(const struct DlcCode *code,
                              const char *path,
                              const char *labels_path);

/**
 * Code length, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t dlc_code_length(const struct DlcCode *code);

/**
 * Code dimension, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t dlc_code_dimension(const struct DlcCode *code);

/**
 * Generator entry `(row, col)` as an element code.
 *
 * # Safety
 * `code` must be a live handle; `out` writable.
 */
enum DlcStatus dlc_code_entry(const struct DlcCode *code, size_t row, size_t col, uint32_t *out);

/**
 * Exact minimum distance; fails with `BudgetExceeded` if more than `budget`
 * codewords would be enumerated (0 selects the default budget).
 *
 * # Safety
 * `code` must be a live handle; `out` writable.
 */
enum DlcStatus dlc_code_min_distance(const struct DlcCode *code, uint64_t budget, size_t *out);

/**
 * Minimum weight over `trials` seeded random codewords (an upper bound on d).
 *
 * # Safety
 * `code` must be a live handle; `out` writable.
 */
enum DlcStatus dlc_code_sampled_min_weight(const struct DlcCode *code,
                                           uint64_t trials,
                                           uint64_t seed,
                                           size_t *out);

/**
 * # Safety
 * `code` must be null or a handle not yet freed.
 */
void dlc_code_free(struct DlcCode *code);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DLCODES_H */
