#ifndef FLIPDIST_H
#define FLIPDIST_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  FD_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  FD_STATUS_NULL_POINTER = 1,
  /**
   * Malformed text, an invalid triangulation, or an illegal flip.
   */
  FD_STATUS_INVALID_INPUT = 2,
  /**
   * A search hit its node or state budget.
   */
  FD_STATUS_BUDGET_EXCEEDED = 3,
  /**
   * The two triangulations are over different point sets.
   */
  FD_STATUS_POINT_SET_MISMATCH = 4,
  /**
   * No value: the instance has no `k`, or the distance exceeds the cap.
   */
  FD_STATUS_NOT_FOUND = 5,
  /**
   * The output buffer is too small; the required size was written.
   */
  FD_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * Internal error. The library state is unaffected.
   */
  FD_STATUS_PANIC = 7,
} FdStatus;

/**
 * A parsed instance file.
 */
typedef struct FdInstance FdInstance;

/**
 * A triangulation of a point set.
 */
typedef struct FdTriangulation FdTriangulation;

/**
 * Options of the decision procedure.
 */
typedef struct {
  /**
   * Memoize solver states. Does not change answers.
   */
  bool pruning;
  /**
   * Keep the walker's stack between runs.
   */
  bool persist_stack;
  /**
   * Abort after this many generated states; 0 means unlimited.
   */
  uint64_t state_budget;
} FdSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fd_version(void);

/**
 * Defaults: pruning on, stack cleared per run, no state budget.
 */
FdSolverOptions fd_solver_options_default(void);

/**
 * Copy of the calling thread's last error message, or NULL if there is
 * none. Free it with [`fd_string_free`].
 */
char *fd_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void fd_string_free(char *s);

/**
 * Parses an instance file from NUL-terminated UTF-8 text.
 *
 * # Safety
 * `text` must be NULL or a valid NUL-terminated string; `out` must be NULL
 * or writable.
 */
FdStatus fd_instance_parse(const char *text, FdInstance **out);

/**
 * # Safety
 * `inst` must be NULL or a handle from [`fd_instance_parse`] not yet freed.
 */
void fd_instance_free(FdInstance *inst);

/**
 * New handle holding a copy of the instance's initial triangulation.
 *
 * # Safety
 * `inst` must be a live handle or NULL; `out` must be writable or NULL.
 */
FdStatus fd_instance_initial(const FdInstance *inst, FdTriangulation **out);

/**
 * New handle holding a copy of the instance's final triangulation.
 *
 * # Safety
 * As for [`fd_instance_initial`].
 */
FdStatus fd_instance_final(const FdInstance *inst, FdTriangulation **out);

/**
 * The instance's `k`, or `FD_STATUS_NOT_FOUND` if the file has none.
 *
 * # Safety
 * `inst` must be a live handle or NULL; `out` must be writable or NULL.
 */
FdStatus fd_instance_k(const FdInstance *inst, size_t *out);

/**
 * Builds a triangulation from `n_points` points given as interleaved
 * `x, y` pairs and `n_triangles` vertex-index triples.
 *
 * # Safety
 * `coords` must point to `2 * n_points` readable values and `triangles` to
 * `3 * n_triangles`; `out` must be writable or NULL.
 */
FdStatus fd_triangulation_new(const int32_t *coords,
                              size_t n_points,
                              const uint32_t *triangles,
                              size_t n_triangles,
                              FdTriangulation **out);

/**
 * Builds another triangulation over the point set of `base`.
 *
 * # Safety
 * `base` must be a live handle or NULL; `triangles` must point to
 * `3 * n_triangles` readable values; `out` must be writable or NULL.
 */
FdStatus fd_triangulation_rebuild(const FdTriangulation *base,
                                  const uint32_t *triangles,
                                  size_t n_triangles,
                                  FdTriangulation **out);

/**
 * # Safety
 * `t` must be a live handle or NULL; `out` must be writable or NULL.
 */
FdStatus fd_triangulation_clone(const FdTriangulation *t, FdTriangulation **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library not yet freed.
 */
void fd_triangulation_free(FdTriangulation *t);

/**
 * Number of points and of triangles.
 *
 * # Safety
 * `t` must be a live handle or NULL; the out-pointers must be writable or NULL.
 */
FdStatus fd_triangulation_size(const FdTriangulation *t, size_t *out_points, size_t *out_triangles);

/**
 * Writes the triangles as sorted vertex triples into `out`, which holds
 * room for `capacity` triangles. `written` receives the triangle count; if
 * it exceeds `capacity`, nothing is copied and `FD_STATUS_BUFFER_TOO_SMALL`
 * is returned. Pass `out = NULL, capacity = 0` to query the count.
 *
 * # Safety
 * `out` must have room for `3 * capacity` values; `t` and `written` must
 * be valid or NULL.
 */
FdStatus fd_triangulation_triangles(const FdTriangulation *t,
                                    uint32_t *out,
                                    size_t capacity,
                                    size_t *written);

/**
 * Whether the edge `ab` can be flipped: interior, with a strictly convex
 * quadrilateral.
 *
 * # Safety
 * `t` must be a live handle or NULL; `out` must be writable or NULL.
 */
FdStatus fd_triangulation_is_admissible(const FdTriangulation *t,
                                        uint32_t a,
                                        uint32_t b,
                                        bool *out);

/**
 * Flips the edge `ab` in place. The new edge's endpoints are written to
 * `out_c` and `out_d` when they are not NULL.
 *
 * # Safety
 * `t` must be a live handle or NULL; `out_c`, `out_d` writable or NULL.
 */
FdStatus fd_triangulation_flip(FdTriangulation *t,
                               uint32_t a,
                               uint32_t b,
                               uint32_t *out_c,
                               uint32_t *out_d);

/**
 * Whether two triangulations are equal (same point set, same triangles).
 *
 * # Safety
 * Handles must be live or NULL; `out` writable or NULL.
 */
FdStatus fd_triangulation_equal(const FdTriangulation *x, const FdTriangulation *y, bool *out);

/**
 * Exact flip distance by breadth-first search. `FD_STATUS_NOT_FOUND` if it
 * exceeds `cap`; `FD_STATUS_BUDGET_EXCEEDED` if more than `node_budget`
 * triangulations would be visited.
 *
 * # Safety
 * Handles must be live or NULL; `out` writable or NULL.
 */
FdStatus fd_flip_distance(const FdTriangulation *from,
                          const FdTriangulation *to,
                          size_t cap,
                          size_t node_budget,
                          size_t *out);

/**
 * Whether `to` is reachable from `from` by exactly `k` flips found by the
 * bounded search. `options` may be NULL for the defaults.
 *
 * # Safety
 * Handles must be live or NULL; `options` valid or NULL; `out` writable or NULL.
 */
FdStatus fd_exists_exactly_k(const FdTriangulation *from,
                             const FdTriangulation *to,
                             size_t k,
                             const FdSolverOptions *options,
                             bool *out);

/**
 * Whether the flip distance from `from` to `to` is exactly `k`.
 *
 * # Safety
 * As for [`fd_exists_exactly_k`].
 */
FdStatus fd_decide_flip_distance(const FdTriangulation *from,
                                 const FdTriangulation *to,
                                 size_t k,
                                 const FdSolverOptions *options,
                                 bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLIPDIST_H */
