#ifndef GHLAB_H
#define GHLAB_H

/* Generated by cbindgen from the ghlab-ffi sources. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum GhlabStatus {
  GHLAB_STATUS_OK = 0,
  GHLAB_STATUS_NULL_POINTER = 1,
  GHLAB_STATUS_INVALID_ARGUMENT = 2,
  GHLAB_STATUS_PARSE_ERROR = 3,
  GHLAB_STATUS_DEGENERATE_SAMPLE = 4,
  GHLAB_STATUS_COMPUTATION_ERROR = 5,
  GHLAB_STATUS_PANIC = 6,
} GhlabStatus;

typedef enum GhlabGroup {
  GHLAB_GROUP_UNITARY = 0,
  GHLAB_GROUP_SYMPLECTIC = 1,
} GhlabGroup;

/**
 * Orthonormal basis of u(n) or sp(n).
 */
typedef struct GhlabBasis GhlabBasis;

/**
 * Finite sum of `c·z^a·log^b z`.
 */
typedef struct GhlabLogPolynomial GhlabLogPolynomial;

/**
 * Block split of a basis.
 */
typedef struct GhlabPair GhlabPair;

/**
 * Polynomial in the entries of a matrix.
 */
typedef struct GhlabPolynomial GhlabPolynomial;

typedef struct GhlabComplex {
  double re;
  double im;
} GhlabComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *ghlab_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ghlab_version(void);

void ghlab_string_free(char *s);

enum GhlabStatus ghlab_basis_new(enum GhlabGroup group, size_t n, struct GhlabBasis **out);

void ghlab_basis_free(struct GhlabBasis *basis);

enum GhlabStatus ghlab_basis_len(const struct GhlabBasis *basis, size_t *out);

/**
 * Side length of the matrices of the defining representation.
 */
enum GhlabStatus ghlab_basis_matrix_dim(const struct GhlabBasis *basis, size_t *out);

/**
 * Casimir constant `c` with `Σ X² ≈ c·I` and the largest entry deviation.
 */
enum GhlabStatus ghlab_basis_casimir(const struct GhlabBasis *basis,
                                     struct GhlabComplex *constant,
                                     double *deviation);

enum GhlabStatus ghlab_pair_new(const struct GhlabBasis *basis,
                                const size_t *blocks,
                                size_t block_count,
                                struct GhlabPair **out);

void ghlab_pair_free(struct GhlabPair *pair);

enum GhlabStatus ghlab_pair_dims(const struct GhlabPair *pair, size_t *k_dim, size_t *m_dim);

/**
 * Coordinate function `z ↦ z[j, alpha]`, one-based indices.
 */
enum GhlabStatus ghlab_poly_coefficient(size_t rows,
                                        size_t cols,
                                        size_t j,
                                        size_t alpha,
                                        struct GhlabPolynomial **out);

/**
 * Determinant of the submatrix on the given one-based rows and columns.
 */
enum GhlabStatus ghlab_poly_minor(size_t rows,
                                  size_t cols,
                                  const size_t *row_indices,
                                  const size_t *col_indices,
                                  size_t size,
                                  struct GhlabPolynomial **out);

/**
 * Parses `(re,im) * z[j,a]*z[k,b] + ...`.
 */
enum GhlabStatus ghlab_poly_parse(size_t rows,
                                  size_t cols,
                                  const char *text,
                                  struct GhlabPolynomial **out);

void ghlab_poly_free(struct GhlabPolynomial *poly);

/**
 * Canonical text; release with `ghlab_string_free`.
 */
enum GhlabStatus ghlab_poly_to_string(const struct GhlabPolynomial *poly, char **out);

/**
 * Value at a row-major `rows × cols` matrix.
 */
enum GhlabStatus ghlab_poly_evaluate(const struct GhlabPolynomial *poly,
                                     const struct GhlabComplex *matrix,
                                     size_t rows,
                                     size_t cols,
                                     struct GhlabComplex *out);

/**
 * Writes the deterministic sample point `(seed, index)` into a row-major
 * buffer of `len = d·d` entries, `d` the matrix dimension.
 */
enum GhlabStatus ghlab_sample_group_point(const struct GhlabBasis *basis,
                                          uint64_t seed,
                                          uint64_t index,
                                          struct GhlabComplex *out,
                                          size_t len);

/**
 * Tension field over the full basis at a row-major point.
 */
enum GhlabStatus ghlab_tau_at(const struct GhlabPolynomial *poly,
                              const struct GhlabBasis *basis,
                              const struct GhlabComplex *point,
                              size_t dim,
                              struct GhlabComplex *out);

/**
 * Conformality operator over the full basis at a row-major point.
 */
enum GhlabStatus ghlab_kappa_at(const struct GhlabPolynomial *f,
                                const struct GhlabPolynomial *h,
                                const struct GhlabBasis *basis,
                                const struct GhlabComplex *point,
                                size_t dim,
                                struct GhlabComplex *out);

/**
 * `Φ_p` for eigen-constants `(lambda, mu)` with coefficients `c1`, `c2`.
 */
enum GhlabStatus ghlab_logpoly_phi_p(uint32_t p,
                                     struct GhlabComplex lambda,
                                     struct GhlabComplex mu,
                                     struct GhlabComplex c1,
                                     struct GhlabComplex c2,
                                     struct GhlabLogPolynomial **out);

/**
 * Parses `(re,im) * z^(re,im) * log^b(z) + ...`.
 */
enum GhlabStatus ghlab_logpoly_parse(const char *text, struct GhlabLogPolynomial **out);

/**
 * Whether `f` is proper `p`-harmonic for the given constants.
 */
enum GhlabStatus ghlab_logpoly_verify(const struct GhlabLogPolynomial *f,
                                      uint32_t p,
                                      struct GhlabComplex lambda,
                                      struct GhlabComplex mu,
                                      bool *passes);

enum GhlabStatus ghlab_logpoly_to_string(const struct GhlabLogPolynomial *f, char **out);

void ghlab_logpoly_free(struct GhlabLogPolynomial *f);

/**
 * Runs a command described by a JSON config and returns the JSON report
 * (release with `ghlab_string_free`) and the exit code the CLI would use.
 */
enum GhlabStatus ghlab_run_json(const char *config_json, char **report_json, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GHLAB_H */
