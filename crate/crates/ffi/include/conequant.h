#ifndef CONEQUANT_H
#define CONEQUANT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum CqStatus {
  CQ_STATUS_OK = 0,
  CQ_STATUS_NULL_POINTER = 1,
  CQ_STATUS_INVALID_INPUT = 2,
  CQ_STATUS_PARSE = 3,
  CQ_STATUS_INVALID_CONE = 4,
  CQ_STATUS_LEVEL_DOMAIN = 5,
  CQ_STATUS_DIMENSION = 6,
  CQ_STATUS_UNSUPPORTED = 7,
  CQ_STATUS_IO = 8,
  CQ_STATUS_PANIC = 9,
} CqStatus;

/**
 * Ordering cone.
 */
typedef struct CqCone CqCone;

/**
 * Quantile or VaR region.
 */
typedef struct CqRegion CqRegion;

/**
 * Weighted point cloud.
 */
typedef struct CqSample CqSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a
 * success. Valid until the next `cq_*` call on the same thread.
 */
const char *cq_last_error(void);

/**
 * Builds a sample from `n` row-major points of dimension `dim`.
 * `weights` may be NULL for uniform weights; otherwise it holds `n`
 * nonnegative values summing to one.
 */
enum CqStatus cq_sample_new(const double *coords,
                            size_t n,
                            size_t dim,
                            const double *weights,
                            struct CqSample **out);

/**
 * Reads a sample CSV file with header `x1,...,xd[,weight]`.
 */
enum CqStatus cq_sample_read_csv(const char *path, struct CqSample **out);

size_t cq_sample_dim(const struct CqSample *s);

size_t cq_sample_len(const struct CqSample *s);

void cq_sample_free(struct CqSample *s);

/**
 * The nonnegative orthant in dimension `dim`.
 */
enum CqStatus cq_cone_orthant(size_t dim, struct CqCone **out);

/**
 * Parses a cone JSON document such as `{"kind":"generators2d",
 * "vectors":[[1,0],[1,2]]}` for samples of dimension `dim`.
 */
enum CqStatus cq_cone_from_json(const char *json, size_t dim, struct CqCone **out);

void cq_cone_free(struct CqCone *c);

/**
 * Cone distribution function of `s` at the point `z` of length `dim`.
 */
enum CqStatus cq_cone_cdf(const struct CqSample *s,
                          const struct CqCone *c,
                          const double *z,
                          size_t dim,
                          double *out);

/**
 * Halfspace (Tukey) depth of `z`.
 */
enum CqStatus cq_tukey_depth(const struct CqSample *s, const double *z, size_t dim, double *out);

/**
 * Componentwise joint distribution function at `z`.
 */
enum CqStatus cq_joint_cdf(const struct CqSample *s, const double *z, size_t dim, double *out);

/**
 * Lower quantile region `{z : F(z) >= p}`.
 */
enum CqStatus cq_lower_quantile_region(const struct CqSample *s,
                                       const struct CqCone *c,
                                       double p,
                                       struct CqRegion **out);

/**
 * Upper quantile region at level `p`.
 */
enum CqStatus cq_upper_quantile_region(const struct CqSample *s,
                                       const struct CqCone *c,
                                       double p,
                                       struct CqRegion **out);

/**
 * Set-valued Value at Risk at level `alpha` in `(0, 1]`.
 */
enum CqStatus cq_var_region(const struct CqSample *s,
                            const struct CqCone *c,
                            double alpha,
                            struct CqRegion **out);

/**
 * Writes whether `z` lies in the region.
 */
enum CqStatus cq_region_contains(const struct CqRegion *r, const double *z, size_t dim, bool *out);

/**
 * Canonical JSON of the region. Free the string with [`cq_string_free`].
 */
enum CqStatus cq_region_to_json(const struct CqRegion *r, char **out);

void cq_string_free(char *s);

void cq_region_free(struct CqRegion *r);

/**
 * First-order dominance of `y` over `x` in the cone order. `exact` is
 * false for the grid check used in dimension three and up. When `z_out`
 * is not NULL and dominance fails, the counterexample point is written to
 * its first `dim` entries.
 */
enum CqStatus cq_fsd(const struct CqSample *y,
                     const struct CqSample *x,
                     const struct CqCone *c,
                     bool *dominates,
                     bool *exact,
                     double *z_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONEQUANT_H */
