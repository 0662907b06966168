#ifndef TOPOGROUP_H
#define TOPOGROUP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
enum TgStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_ARGUMENT = 1,
  TG_STATUS_INVALID_UTF8 = 2,
  /**
   * A descriptor did not parse or named an unsupported group or system.
   */
  TG_STATUS_INVALID_DESCRIPTOR = 3,
  /**
   * A subgroup index or element was out of range.
   */
  TG_STATUS_OUT_OF_RANGE = 4,
  /**
   * The operation failed for a mathematical reason, e.g. a filter without the fip.
   */
  TG_STATUS_FAILED = 5,
  /**
   * A bug: the library panicked. The handle arguments remain valid.
   */
  TG_STATUS_PANIC = 6,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum TgStatus TgStatus;
#else
typedef int32_t TgStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Subgroup lattice of a finite group.
 */
typedef struct TgLattice TgLattice;

/**
 * Topo-system on a lattice. Holds its own reference to the lattice.
 */
typedef struct TgSystem TgSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the subgroup lattice of the group named by `descriptor` (e.g. `"sym:3"`).
 * Free the handle with [`tg_lattice_free`].
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
TgStatus tg_lattice_new(const char *descriptor, struct TgLattice **out);

/**
 * # Safety
 * `lattice` must come from [`tg_lattice_new`] and not be freed twice. Null is ignored.
 */
void tg_lattice_free(struct TgLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
TgStatus tg_lattice_group_order(const struct TgLattice *lattice, size_t *out);

/**
 * Number of subgroups.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
TgStatus tg_lattice_len(const struct TgLattice *lattice, size_t *out);

/**
 * Element bitmask of subgroup `index`.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
TgStatus tg_lattice_members(const struct TgLattice *lattice, size_t index, uint64_t *out);

/**
 * Number of distinct subgroup ultrafilters.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
TgStatus tg_ultrafilter_count(const struct TgLattice *lattice, size_t *out);

/**
 * Builds a topo-system such as `"normal"` or `"generated:#1,#2"` on `lattice`.
 * Free the handle with [`tg_system_free`]; the lattice handle may be freed first.
 *
 * # Safety
 * `lattice` must be a live handle, `descriptor` NUL-terminated, `out` writable.
 */
TgStatus tg_system_new(const struct TgLattice *lattice,
                       const char *descriptor,
                       struct TgSystem **out);

/**
 * # Safety
 * `system` must come from [`tg_system_new`] and not be freed twice. Null is ignored.
 */
void tg_system_free(struct TgSystem *system);

/**
 * Whether subgroup `index` is topen.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
TgStatus tg_system_contains(const struct TgSystem *system, size_t index, bool *out);

/**
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
TgStatus tg_system_is_hausdorff(const struct TgSystem *system, bool *out);

/**
 * Index of the interior of subgroup `index`.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
TgStatus tg_system_interior(const struct TgSystem *system, size_t index, size_t *out);

/**
 * Index of the closure of subgroup `index`; its limit points go to `limits` unless that
 * is null.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable; `limits` null or writable.
 */
TgStatus tg_system_closure(const struct TgSystem *system,
                           size_t index,
                           size_t *out,
                           uint64_t *limits);

/**
 * Whether the ultrafilter of subgroups containing `generator` converges to `point`.
 *
 * # Safety
 * `system` must be a live handle; `out` must be writable.
 */
TgStatus tg_principal_converges(const struct TgSystem *system,
                                size_t generator,
                                size_t point,
                                bool *out);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated, truncated
 * to `len`) and returns the full message length in bytes, excluding the NUL. Pass a null
 * `buf` to query the length.
 *
 * # Safety
 * `buf` must be null or writable for `len` bytes.
 */
size_t tg_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOPOGROUP_H */
