#ifndef DIMLAB_H
#define DIMLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DimlabStatus {
  DIMLAB_STATUS_OK = 0,
  DIMLAB_STATUS_NULL_POINTER = 1,
  DIMLAB_STATUS_INVALID_UTF8 = 2,
  DIMLAB_STATUS_PARSE = 3,
  DIMLAB_STATUS_INVALID_INPUT = 4,
  DIMLAB_STATUS_RESOURCE_LIMIT = 5,
  DIMLAB_STATUS_OVERFLOW = 6,
  DIMLAB_STATUS_PANIC = 7,
} DimlabStatus;

typedef enum DimlabDimKind {
  DIMLAB_DIM_KIND_VC = 0,
  DIMLAB_DIM_KIND_LITTLESTONE = 1,
  DIMLAB_DIM_KIND_FAT = 2,
  DIMLAB_DIM_KIND_SEQ_FAT = 3,
  DIMLAB_DIM_KIND_GRAPH = 4,
  DIMLAB_DIM_KIND_THRESHOLD = 5,
} DimlabDimKind;

// Opaque handle to a hypothesis class.
typedef struct DimlabClass DimlabClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next library call on the same thread.
const char *dimlab_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void dimlab_string_free(char *s);

// # Safety
// `h` must be null or a handle returned by this library.
void dimlab_class_free(struct DimlabClass *h);

// Parses a class from its JSON form.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum DimlabStatus dimlab_class_from_json(const char *json, struct DimlabClass **out);

// # Safety
// `h` must be a valid handle and `out` writable.
enum DimlabStatus dimlab_class_to_json(const struct DimlabClass *h, char **out);

// Built-in family by name: `powerset`, `threshold`, `interval`,
// `even_interval`, `h0`, `h0_two_choice`.
//
// # Safety
// `name` must be a nul-terminated string and `out` writable.
enum DimlabStatus dimlab_class_generate(const char *name, size_t n, struct DimlabClass **out);

// # Safety
// `h` must be a valid handle; `n_x` and `n_y` writable.
enum DimlabStatus dimlab_class_shape(const struct DimlabClass *h, size_t *n_x, size_t *n_y);

// Dual class (points and hypotheses swapped).
//
// # Safety
// `h` must be a valid handle and `out` writable.
enum DimlabStatus dimlab_class_dual(const struct DimlabClass *h, struct DimlabClass **out);

// Computes a dimension. `gamma` is ignored for `Vc` and `Littlestone` and
// may be null there; otherwise it is a rational string. When `witness_json`
// is non-null it receives the witness.
//
// # Safety
// `h` must be a valid handle, `gamma` null or nul-terminated, `dim` writable.
enum DimlabStatus dimlab_dimension(const struct DimlabClass *h,
                                   enum DimlabDimKind kind,
                                   const char *gamma,
                                   size_t *dim,
                                   char **witness_json);

// Exact value of the realizable game over `t` rounds under `loss`
// (`id`, `l:<eps>` or `L:<eps>`). The exact value is written to `value` as a
// rational string and its float approximation to `approx`.
//
// # Safety
// `h` must be a valid handle, `loss` nul-terminated, outputs writable.
enum DimlabStatus dimlab_realizable_value(const struct DimlabClass *h,
                                          const char *loss,
                                          size_t t,
                                          char **value,
                                          double *approx);

// Exact agnostic minimax regret over `t` rounds with default grids.
//
// # Safety
// `h` must be a valid handle, `loss` nul-terminated, outputs writable.
enum DimlabStatus dimlab_agnostic_value(const struct DimlabClass *h,
                                        const char *loss,
                                        size_t t,
                                        char **value,
                                        double *approx);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIMLAB_H */
