#ifndef ARQ_H
#define ARQ_H

/* Generated by cbindgen from the arq-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call. Anything but `Ok` leaves a
 * description in `arq_last_error`.
 */
typedef enum ArqStatus {
  ARQ_STATUS_OK = 0,
  /**
   * Input text or arguments did not parse.
   */
  ARQ_STATUS_PARSE_ERROR = 1,
  /**
   * The computation ran and a mathematical check failed.
   */
  ARQ_STATUS_DOMAIN_ERROR = 2,
  ARQ_STATUS_NULL_POINTER = 3,
  ARQ_STATUS_INVALID_UTF8 = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  ARQ_STATUS_PANIC = 5,
} ArqStatus;

/**
 * A knitted Auslander-Reiten component over one ground field.
 */
typedef struct ArqComponent ArqComponent;

/**
 * A knitted component together with the truncated universal cover of its
 * AR quiver, rooted at the first module.
 */
typedef struct ArqCovering ArqCovering;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static string; never freed.
 */
const char *arq_version(void);

/**
 * Description of the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread; do not
 * free it.
 */
const char *arq_last_error(void);

/**
 * Releases a string obtained from any `arq_*` out parameter.
 */
void arq_string_free(char *s);

/**
 * Validates translation quiver text: `Ok` when it parses and satisfies
 * the axioms, `DomainError` with the violation list otherwise.
 */
enum ArqStatus arq_check_quiver(const char *tq_text);

/**
 * Knits the component of the path algebra described by `alg_text` over
 * `field` (`"q"` or `"f<p>"`) and stores a fresh handle in `out`.
 */
enum ArqStatus arq_component_knit(const char *alg_text,
                                  const char *field,
                                  struct ArqComponent **out);

/**
 * Releases a component handle. Null is ignored.
 */
void arq_component_free(struct ArqComponent *handle);

/**
 * Number of indecomposable modules in the component.
 */
enum ArqStatus arq_component_module_count(const struct ArqComponent *handle, size_t *out);

/**
 * Name of the module at `index` in sorted order. The string must be
 * released with `arq_string_free`.
 */
enum ArqStatus arq_component_module_name(const struct ArqComponent *handle,
                                         size_t index,
                                         char **out);

/**
 * Knitting level of the named module.
 */
enum ArqStatus arq_component_level(const struct ArqComponent *handle,
                                   const char *module,
                                   int64_t *out);

/**
 * Dimension of the n-th radical power of Hom(x, y); `n = 0` is the full
 * hom space.
 */
enum ArqStatus arq_component_rad_dim(const struct ArqComponent *handle,
                                     const char *x,
                                     const char *y,
                                     size_t n,
                                     size_t *out);

/**
 * Re-derives every certificate of the component: arrow multiplicities
 * against rad/rad^2 and the full almost split factorization checks.
 */
enum ArqStatus arq_component_verify(const struct ArqComponent *handle);

/**
 * Serializes the AR quiver of the component as translation quiver text.
 * The string must be released with `arq_string_free`.
 */
enum ArqStatus arq_component_export_tq(const struct ArqComponent *handle, char **out);

/**
 * Knits the component for `alg_text` over `field` and builds the
 * radius-`radius` universal cover of its AR quiver.
 */
enum ArqStatus arq_covering_build(const char *alg_text,
                                  const char *field,
                                  size_t radius,
                                  struct ArqCovering **out);

/**
 * Releases a covering handle. Null is ignored.
 */
void arq_covering_free(struct ArqCovering *handle);

/**
 * Vertex count of the truncated cover and size of its interior.
 */
enum ArqStatus arq_covering_cover_size(const struct ArqCovering *handle,
                                       size_t *out_vertices,
                                       size_t *out_interior);

/**
 * Checks the graded covering bijections and generalized standardness on
 * the cover. `out_pairs` receives the number of fully verified pairs,
 * `out_undecidable` the pairs skipped for exceeding the truncation.
 */
enum ArqStatus arq_covering_verify(const struct ArqCovering *handle,
                                   size_t *out_pairs,
                                   size_t *out_undecidable);

/**
 * Decides the radical degree of a composite along `path_spec`, written
 * `X1 > X2 > ... [perturb i]` with component module names. The rendered
 * verdict goes to `out`; release it with `arq_string_free`.
 */
enum ArqStatus arq_covering_compose_degree(const struct ArqCovering *handle,
                                           const char *path_spec,
                                           char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ARQ_H */
