#ifndef NCJET_H
#define NCJET_H

/* Generated by cbindgen from crates/ncjet-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Jet flavours, in increasing order of restriction.
typedef enum NcjetFlavor {
  NCJET_FLAVOR_NONHOLONOMIC = 0,
  NCJET_FLAVOR_SEMIHOLONOMIC = 1,
  NCJET_FLAVOR_SESQUIHOLONOMIC = 2,
  NCJET_FLAVOR_HOLONOMIC = 3,
} NcjetFlavor;

// Result codes; `NCJET_STATUS_OK` is zero.
typedef enum NcjetStatus {
  NCJET_STATUS_OK = 0,
  NCJET_STATUS_NULL_ARGUMENT = 1,
  NCJET_STATUS_INVALID_UTF8 = 2,
  NCJET_STATUS_PARSE = 3,
  NCJET_STATUS_VALIDATION = 4,
  NCJET_STATUS_DIMENSION = 5,
  NCJET_STATUS_TOO_LARGE = 6,
  NCJET_STATUS_BUFFER_TOO_SMALL = 7,
  NCJET_STATUS_INTERNAL = 8,
  NCJET_STATUS_PANIC = 9,
} NcjetStatus;

// A validated finite-dimensional algebra.
typedef struct NcjetAlgebra NcjetAlgebra;

// A validated first-order calculus.
typedef struct NcjetCalculus NcjetCalculus;

// A validated left module.
typedef struct NcjetModule NcjetModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates an algebra from its JSON description.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum NcjetStatus ncjet_algebra_from_json(const char *json, struct NcjetAlgebra **out);

// # Safety
// `alg` must be null or a handle from [`ncjet_algebra_from_json`].
void ncjet_algebra_free(struct NcjetAlgebra *alg);

// Vector-space dimension of the algebra (0 for a null handle).
//
// # Safety
// `alg` must be null or a live handle.
size_t ncjet_algebra_dim(const struct NcjetAlgebra *alg);

// Parses and validates a calculus over `alg`.
//
// # Safety
// `alg` must be a live handle, `json` NUL-terminated, `out` valid.
enum NcjetStatus ncjet_calculus_from_json(const struct NcjetAlgebra *alg,
                                          const char *json,
                                          struct NcjetCalculus **out);

// # Safety
// `calc` must be null or a handle from [`ncjet_calculus_from_json`].
void ncjet_calculus_free(struct NcjetCalculus *calc);

// Dimension of `Ω¹` (0 for a null handle).
//
// # Safety
// `calc` must be null or a live handle.
size_t ncjet_calculus_omega1_dim(const struct NcjetCalculus *calc);

// Parses and validates a module over `alg`. The strings `"regular"` and
// `"point"` name `A` itself and `k[0]`.
//
// # Safety
// `alg` must be a live handle, `json` NUL-terminated, `out` valid.
enum NcjetStatus ncjet_module_from_json(const struct NcjetAlgebra *alg,
                                        const char *json,
                                        struct NcjetModule **out);

// # Safety
// `m` must be null or a handle from [`ncjet_module_from_json`].
void ncjet_module_free(struct NcjetModule *m);

// # Safety
// `m` must be null or a live handle.
size_t ncjet_module_dim(const struct NcjetModule *m);

// Writes `dim J^k E` for `k = 0..=order` into `dims`, which must hold
// `order + 1` entries. `module` may be null for `E = A`. Exterior forms
// are truncated at grade `truncate`.
//
// # Safety
// Handles must be live; `dims` must point to `len` writable entries.
enum NcjetStatus ncjet_jet_dims(const struct NcjetCalculus *calc,
                                const struct NcjetModule *module,
                                enum NcjetFlavor flavor,
                                size_t order,
                                size_t truncate,
                                size_t *dims,
                                size_t len);

// The built-in report `"quaternion"` or `"infinitesimal"` as a JSON
// string, to be released with [`ncjet_string_free`].
//
// # Safety
// `name` must be NUL-terminated and `out` valid.
enum NcjetStatus ncjet_report(const char *name, char **out);

// # Safety
// `s` must be null or a string returned by this library.
void ncjet_string_free(char *s);

// The message of the last failure on this thread, or null. The pointer is
// valid until the next call into the library on the same thread.
const char *ncjet_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCJET_H */
