#ifndef PGA_POLAR_H
#define PGA_POLAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PGA_OK 0

#define PGA_ERR_NULL_POINTER 1

#define PGA_ERR_INVALID_ARGUMENT 2

#define PGA_ERR_IO 3

#define PGA_ERR_CONVERGENCE 4

#define PGA_ERR_SIZE_MISMATCH 5

#define PGA_ERR_BUFFER_TOO_SMALL 6

#define PGA_ERR_PANIC 7

#define PGA_KERNEL_EGA 0

#define PGA_KERNEL_AGA 1

#define PGA_KERNEL_PGA 2

#define PGA_KERNEL_APGA 3

#define PGA_KERNEL_SPGA 4

/**
 * SC decoder bound to one frozen set; not safe for concurrent use.
 */
typedef struct PgaDecoder PgaDecoder;

/**
 * A constructed code: parameters, kernel name and frozen indices.
 */
typedef struct PgaFrozenSet PgaFrozenSet;

/**
 * Counters for one simulated SNR point.
 */
typedef struct PgaSimResult {
  double snr_db;
  uint64_t frames;
  uint64_t frame_errors;
  uint64_t bit_errors;
  double fer;
  double ber;
  uint64_t seed;
} PgaSimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *pga_last_error_message(void);

/**
 * Degraded-child single-step map of `kernel_id` at mean LLR `x`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
int32_t pga_kernel_step(uint32_t kernel_id, double x, double *out);

/**
 * Constructs PC(n, k) at `design_snr_db` and stores a new handle in `out`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
int32_t pga_construct(size_t n,
                      size_t k,
                      double design_snr_db,
                      uint32_t kernel_id,
                      struct PgaFrozenSet **out);

/**
 * Reads a frozen-set file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for one write.
 */
int32_t pga_frozen_set_load(const char *path_, struct PgaFrozenSet **out);

/**
 * Writes a frozen-set file.
 *
 * # Safety
 * `set` must be a live handle and `path` a NUL-terminated string.
 */
int32_t pga_frozen_set_save(const struct PgaFrozenSet *set, const char *path_);

/**
 * Releases a handle; NULL is ignored.
 *
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void pga_frozen_set_free(struct PgaFrozenSet *set);

/**
 * Block length N, or 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t pga_frozen_set_n(const struct PgaFrozenSet *set);

/**
 * Information length K, or 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t pga_frozen_set_k(const struct PgaFrozenSet *set);

/**
 * Copies the N - K ascending frozen indices into `buf`.
 *
 * # Safety
 * `set` must be a live handle; `buf` must hold `capacity` elements.
 */
int32_t pga_frozen_set_indices(const struct PgaFrozenSet *set, size_t *buf, size_t capacity);

/**
 * Number of frozen positions of `a` that `reference` does not freeze.
 *
 * # Safety
 * Both handles must be live; `out` must be valid for one write.
 */
int32_t pga_ndp(const struct PgaFrozenSet *a, const struct PgaFrozenSet *reference, size_t *out);

/**
 * Encodes `k` information bits (one byte each, 0 or 1) into `n` code bits.
 *
 * # Safety
 * `set` must be a live handle; `info` must hold `k` bytes and `codeword` `n`.
 */
int32_t pga_encode(const struct PgaFrozenSet *set,
                   const uint8_t *info,
                   size_t k,
                   uint8_t *codeword,
                   size_t n);

/**
 * Creates an SC decoder for `set`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be valid for one write.
 */
int32_t pga_decoder_new(const struct PgaFrozenSet *set, struct PgaDecoder **out);

/**
 * Decodes `n` channel LLRs (`ln W(y|0)/W(y|1)`) into `k` information bits.
 *
 * # Safety
 * `dec` must be a live handle; `llr` must hold `n` values, `info` `k` bytes.
 */
int32_t pga_decoder_decode(struct PgaDecoder *dec,
                           const double *llr,
                           size_t n,
                           uint8_t *info,
                           size_t k);

/**
 * Releases a decoder; NULL is ignored.
 *
 * # Safety
 * `dec` must come from this library and not be used afterwards.
 */
void pga_decoder_free(struct PgaDecoder *dec);

/**
 * Simulates one Eb/N0 point over BPSK/AWGN with SC decoding until
 * `target_frame_errors` or `max_frames`. `workers` of 0 uses all cores.
 *
 * # Safety
 * `set` must be a live handle; `out` must be valid for one write.
 */
int32_t pga_simulate_point(const struct PgaFrozenSet *set,
                           double snr_db,
                           uint64_t seed,
                           uint64_t target_frame_errors,
                           uint64_t max_frames,
                           size_t workers,
                           struct PgaSimResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PGA_POLAR_H */
