#ifndef NILREG_H
#define NILREG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum NilregStatus {
  NILREG_STATUS_OK = 0,
  NILREG_STATUS_NULL_POINTER = 1,
  NILREG_STATUS_INVALID_UTF8 = 2,
  /*
   Unknown name or malformed catalog data.
   */
  NILREG_STATUS_CATALOG = 3,
  NILREG_STATUS_BUDGET = 4,
  NILREG_STATUS_DOMAIN = 5,
  NILREG_STATUS_CONFIG = 6,
  NILREG_STATUS_TRUNCATION = 7,
  NILREG_STATUS_VERIFICATION = 8,
  NILREG_STATUS_NUMERICAL = 9,
  /*
   The output buffer is too small.
   */
  NILREG_STATUS_BUFFER_TOO_SMALL = 10,
  NILREG_STATUS_IO = 11,
  /*
   Any other library error, or a caught panic.
   */
  NILREG_STATUS_INTERNAL = 12,
} NilregStatus;

/*
 A group catalog.
 */
typedef struct NilregCatalog NilregCatalog;

/*
 An interval realization.
 */
typedef struct NilregSystem NilregSystem;

/*
 Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *nilreg_last_error(void);

/*
 # Safety
 `s` must come from this library or be null.
 */
void nilreg_string_free(char *s);

/*
 The shipped catalog.

 # Safety
 `out` must be a valid pointer.
 */
enum NilregStatus nilreg_catalog_builtin(struct NilregCatalog **out);

/*
 Parses a catalog JSON document.

 # Safety
 `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum NilregStatus nilreg_catalog_from_json(const char *json, struct NilregCatalog **out);

/*
 # Safety
 `cat` must come from a `nilreg_catalog_*` constructor or be null.
 */
void nilreg_catalog_free(struct NilregCatalog *cat);

/*
 Hex SHA-256 of the catalog source, as a string to free with `nilreg_string_free`.

 # Safety
 Pointers must be valid.
 */
enum NilregStatus nilreg_catalog_hash(const struct NilregCatalog *cat, char **out);

/*
 `D_G` of a catalog group.

 # Safety
 Pointers must be valid and `group` nul-terminated.
 */
enum NilregStatus nilreg_bass_guivarch(const struct NilregCatalog *cat,
                                       const char *group,
                                       uintptr_t *out);

/*
 `D_{H;G}` and `gr(G/H)` for a catalog subgroup.

 # Safety
 Pointers must be valid and names nul-terminated.
 */
enum NilregStatus nilreg_subgroup_degrees(const struct NilregCatalog *cat,
                                          const char *group,
                                          const char *subgroup,
                                          uintptr_t *relative,
                                          uintptr_t *schreier);

/*
 Critical regularity as `num/den`; `den = 0` means unbounded.

 # Safety
 Pointers must be valid and `group` nul-terminated.
 */
enum NilregStatus nilreg_crit(const struct NilregCatalog *cat,
                              const char *group,
                              int64_t *num,
                              int64_t *den);

/*
 Cumulative ball counts `#B_0 .. #B_radius` into `buf`, which must hold `radius + 1` entries.
 `max_elements = 0` means no cap.

 # Safety
 `buf` must point to `len` writable entries.
 */
enum NilregStatus nilreg_ball_counts(const struct NilregCatalog *cat,
                                     const char *group,
                                     uintptr_t radius,
                                     uintptr_t max_elements,
                                     uint64_t *buf,
                                     uintptr_t len);

/*
 Time-`t` map of the flow of `x(1-x)^2` and its derivative.

 # Safety
 `value` and `derivative` must be valid pointers.
 */
enum NilregStatus nilreg_flow(double t, double x, double *value, double *derivative);

/*
 Builds a realization with automatic parameters and `J >= min_j`.

 # Safety
 Pointers must be valid and names nul-terminated.
 */
enum NilregStatus nilreg_system_build(const struct NilregCatalog *cat,
                                      const char *group,
                                      const char *witness,
                                      uintptr_t radius,
                                      double alpha,
                                      int64_t min_j,
                                      struct NilregSystem **out);

/*
 # Safety
 `sys` must come from `nilreg_system_build` or be null.
 */
void nilreg_system_free(struct NilregSystem *sys);

/*
 Number of cosets, `J`, and the identity coset.

 # Safety
 Pointers must be valid.
 */
enum NilregStatus nilreg_system_shape(const struct NilregSystem *sys,
                                      uintptr_t *cosets,
                                      int64_t *j_max,
                                      uintptr_t *identity);

/*
 Index of a letter by name (`e`, `a`, `a^-1`, ...).

 # Safety
 Pointers must be valid and `name` nul-terminated.
 */
enum NilregStatus nilreg_system_letter(const struct NilregSystem *sys,
                                       const char *name,
                                       uintptr_t *out);

/*
 Applies letter `k` to the point `(v, j, u)` and returns the image and the derivative there.
 Edges leaving the truncation are an error.

 # Safety
 Pointers must be valid.
 */
enum NilregStatus nilreg_system_apply(const struct NilregSystem *sys,
                                      uintptr_t k,
                                      uintptr_t v,
                                      int64_t j,
                                      double u,
                                      uintptr_t *out_v,
                                      int64_t *out_j,
                                      double *out_u,
                                      double *derivative);

/*
 Position of `(v, j, u)` in `[0, total length]`.

 # Safety
 Pointers must be valid.
 */
enum NilregStatus nilreg_system_position(const struct NilregSystem *sys,
                                         uintptr_t v,
                                         int64_t j,
                                         double u,
                                         double *out);

/*
 Estimated Hölder constant of `Dk` on `I_v`.

 # Safety
 Pointers must be valid.
 */
enum NilregStatus nilreg_system_holder(const struct NilregSystem *sys,
                                       uintptr_t k,
                                       uintptr_t v,
                                       double alpha,
                                       uintptr_t nodes,
                                       double *out);

/*
 The system layout as JSON, to free with `nilreg_string_free`.

 # Safety
 Pointers must be valid.
 */
enum NilregStatus nilreg_system_json(const struct NilregSystem *sys, char **out);

#endif  /* NILREG_H */
