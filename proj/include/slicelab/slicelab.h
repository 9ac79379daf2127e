/*
 * slicelab — a desk-scale laboratory for Boolean-slice analysis: Gowers
 * uniformity norms, the slice/residue dense-model distance, low-soundness
 * linearity and degree testers, and non-classical polynomial correlation.
 *
 * C API over the C++ core. All objects are opaque handles; every function
 * returns a status code and reports results through out-parameters. On any
 * non-OK status, sl_last_error() carries a one-line message for the calling
 * thread.
 *
 * Conventions shared with the file formats: a point of {0,1}^m is an
 * integer whose bit i is coordinate i; dense tables hold 2^m values in that
 * index order.
 */

#ifndef SLICELAB_SLICELAB_H
#define SLICELAB_SLICELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SLICELAB_API __declspec(dllexport)
#else
#define SLICELAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_ARGUMENT = 1,   /* contract violation (bad parameter, dim mismatch) */
  SL_ERR_BUDGET = 2,     /* exhaustive mode beyond its documented cap */
  SL_ERR_IO = 3,         /* file missing or malformed */
  SL_ERR_STALL = 4,      /* rejection sampler made 10^7 proposals, none accepted */
  SL_ERR_NO_WITNESS = 5, /* biased-rank search found no qualifying residue shift */
  SL_ERR_INTERNAL = 6
} sl_status;

SLICELAB_API const char* sl_version(void);
SLICELAB_API const char* sl_status_name(sl_status status);
/* message of the most recent failure on this thread; never NULL */
SLICELAB_API const char* sl_last_error(void);

/* caps worker threads for all subsequent calls; n <= 0 restores the
 * hardware default. Outputs never depend on this setting. */
SLICELAB_API void sl_set_threads(int n);

/* ------------------------------------------------------------------ */
/* function tables                                                     */

typedef struct sl_table sl_table;

SLICELAB_API sl_status sl_table_create(int dim, const double* values, sl_table** out);
SLICELAB_API sl_status sl_table_read_file(const char* path, sl_table** out);
SLICELAB_API sl_status sl_table_write_file(const sl_table* t, const char* path);
SLICELAB_API void sl_table_free(sl_table* t);
SLICELAB_API int sl_table_dim(const sl_table* t);
/* pointer to the 2^dim values, valid while the table lives */
SLICELAB_API const double* sl_table_values(const sl_table* t);

/* parity of (x & subset) on every point of {0,1}^dim, then each slice point
 * flipped independently with probability flip_rate (one stream per seed) */
SLICELAB_API sl_status sl_table_synthetic_linear(int dim, uint32_t subset, double flip_rate,
                                                 uint64_t seed, sl_table** out);
/* uniformly random 0/1 table */
SLICELAB_API sl_status sl_table_random_boolean(int dim, uint64_t seed, sl_table** out);

/* ------------------------------------------------------------------ */
/* domains                                                             */

typedef enum sl_domain_kind {
  SL_DOMAIN_CUBE = 0,
  SL_DOMAIN_SLICE = 1,
  SL_DOMAIN_RESIDUE = 2
} sl_domain_kind;

typedef struct sl_domain sl_domain;

/* k is consulted for SL_DOMAIN_RESIDUE only; the residue class is always
 * a = n mod 2^{k-1}, derived from (dim, k) */
SLICELAB_API sl_status sl_domain_create(sl_domain_kind kind, int dim, int k, sl_domain** out);
SLICELAB_API void sl_domain_free(sl_domain* d);
SLICELAB_API sl_status sl_domain_member(const sl_domain* d, uint64_t x, int* out);
/* density as a double plus the exact fraction "num/den" when exact_buf is
 * non-NULL (buffer of exact_len bytes, NUL-terminated) */
SLICELAB_API sl_status sl_domain_density(const sl_domain* d, double* density, char* exact_buf,
                                         size_t exact_len);
SLICELAB_API sl_status sl_domain_indicator(const sl_domain* d, int normalized, sl_table** out);

/* ------------------------------------------------------------------ */
/* fourier                                                             */

/* chi_S(x) = (-1)^{|S & x|} */
SLICELAB_API sl_status sl_character_eval(uint32_t subset, uint64_t x, int dim, int* out);
/* spectrum as a table of coefficients indexed by subset mask (dim <= 28) */
SLICELAB_API sl_status sl_wht(const sl_table* f, sl_table** spectrum);
SLICELAB_API sl_status sl_wht_inverse(const sl_table* spectrum, sl_table** f);
SLICELAB_API sl_status sl_level_weight(const sl_table* spectrum, int d, double* out);

typedef struct sl_level_inequality {
  double alpha;  /* E|f| */
  double weight; /* W_{<=d}[f] */
  double ratio;  /* weight / alpha^2 */
} sl_level_inequality;

/* f must take values in {-1, 0, 1} with E|f| > 0 */
SLICELAB_API sl_status sl_level_inequality_report(const sl_table* f, int d,
                                                  sl_level_inequality* out);

/* k largest |coefficients|, descending, ties to the smaller subset mask;
 * writes min(k, 2^dim) entries and stores that count in *written */
SLICELAB_API sl_status sl_spectrum_top(const sl_table* spectrum, int k, uint32_t* subsets,
                                       double* coefficients, int* written);

/* ------------------------------------------------------------------ */
/* gowers norms                                                        */

typedef enum sl_mode { SL_MODE_EXACT = 0, SL_MODE_MONTE_CARLO = 1 } sl_mode;

typedef struct sl_gowers_estimate {
  int order;
  double value_pow; /* the 2^order-th power (parallelepiped average) */
  double value;     /* nonnegative 2^order-th root */
  int mode;         /* sl_mode */
  uint64_t samples;
  uint64_t seed;
  double ci_radius; /* 95% half-width on value_pow; 0 in exact mode */
  int clipped;      /* negative Monte Carlo value_pow clipped to 0 */
} sl_gowers_estimate;

SLICELAB_API sl_status sl_derivative(const sl_table* f, uint64_t h, sl_table** out);
/* s = 1 via |E f|; s = 2 via sum fhat^4 (dim <= 24); s >= 3 via the exact
 * derivative recursion, feasible while dim*(s-2) <= 28 */
SLICELAB_API sl_status sl_gowers_exact(const sl_table* f, int s, sl_gowers_estimate* out);
/* s >= 3; samples outer directions, exact inner U_2; deterministic per seed */
SLICELAB_API sl_status sl_gowers_mc(const sl_table* f, int s, uint64_t samples, uint64_t seed,
                                    sl_gowers_estimate* out);

/* ------------------------------------------------------------------ */
/* slice model                                                         */

/* ||1_U/E[1_U] - 1_D/E[1_D]||_{U_s} for U_{2n} and D_{2n,k}; s <= k;
 * s = 1 is exactly 0. mode SL_MODE_MONTE_CARLO requires s >= 3. */
SLICELAB_API sl_status sl_dense_model_distance(int n, int k, int s, sl_mode mode,
                                               uint64_t samples, uint64_t seed,
                                               sl_gowers_estimate* out);

/* (c + d - b)/2 mod 2^{j-1} for the residues b, c, d of |x xor z|, |x|, |z|
 * mod 2^j; verified against the directly counted |x and z| */
SLICELAB_API sl_status sl_weight_intersection_residue(uint64_t x, uint64_t z, int dim, int j,
                                                      int* out);

/* |orb_S| under atom-preserving permutations of the algebra generated by
 * the t generator supports: prod over atoms B of C(|B|, |S cap B|) */
SLICELAB_API sl_status sl_orbit_size(uint64_t subset, int dim, const uint64_t* generators,
                                     int t, uint64_t* out);

/* exact Pr_x[|x xor z_i| = w_i for all i], z_i in Span(generators); dim <= 20;
 * the probability is count / 2^dim */
SLICELAB_API sl_status sl_joint_slice_probability(int dim, const uint64_t* generators, int t,
                                                  const uint64_t* zs, const int* weights,
                                                  int constraints, uint64_t* count,
                                                  int* log2_den);

/* exhaustive check (dim <= 16, t <= 3) that atom intersection weights are
 * determined by the span weight tuple */
SLICELAB_API sl_status sl_atom_determinism_check(int dim, const uint64_t* generators, int t,
                                                 int* out);

/* ------------------------------------------------------------------ */
/* testers                                                             */

typedef struct sl_test_outcome {
  double pass_rate;
  int mode; /* sl_mode */
  uint64_t trials;
  uint64_t seed;
  double ci_radius; /* 95% half-width; 0 in exact mode */
} sl_test_outcome;

typedef struct sl_linear_decoding {
  uint32_t subset;
  int sign_bit;       /* decoded prediction is sign_bit xor L_subset */
  double coefficient; /* fhat'(subset) */
  double agreement;   /* exact fraction of the slice where f matches */
} sl_linear_decoding;

/* f: 0/1 table on {0,1}^{2n}, consulted on the slice; exact mode needs
 * 2n <= 12 */
SLICELAB_API sl_status sl_linearity_pass_rate(const sl_table* f, sl_mode mode, uint64_t trials,
                                              uint64_t seed, sl_test_outcome* out);
/* parity check over conditioned d-parallelepipeds; exact mode needs
 * 2n*(d+1) <= 26 */
SLICELAB_API sl_status sl_gowers_test_pass_rate(const sl_table* f, int d, sl_mode mode,
                                                uint64_t trials, uint64_t seed,
                                                sl_test_outcome* out);
/* exact Pr[all 2^d points of a uniform parallelepiped lie on the slice] and
 * the bound density^{2^d}; 2n*(d+1) <= 26 */
SLICELAB_API sl_status sl_parallelepiped_probability(int n, int d, double* probability,
                                                     double* bound, int* equality);
SLICELAB_API sl_status sl_decode_linear(const sl_table* f, int k_residue,
                                        sl_linear_decoding* out);
/* eps = E[F(x)F(y)F(z)F(xyz)] = sum Fhat^4 and max_S |Fhat(S)| >= sqrt(eps);
 * requires ||F||_inf <= 1 */
SLICELAB_API sl_status sl_max_fourier_check(const sl_table* F, double* eps, double* max_coeff);

/* ------------------------------------------------------------------ */
/* non-classical polynomials                                           */

typedef struct sl_torus_poly sl_torus_poly;

/* values numerators[x] / 2^q in [0,1); q <= 62 */
SLICELAB_API sl_status sl_torus_poly_create(int dim, int q, const uint64_t* numerators,
                                            sl_torus_poly** out);
/* reads a dense table file whose entries must be dyadic rationals in [0,1) */
SLICELAB_API sl_status sl_torus_poly_read_file(const char* path, sl_torus_poly** out);
SLICELAB_API void sl_torus_poly_free(sl_torus_poly* p);
SLICELAB_API int sl_torus_poly_dim(const sl_torus_poly* p);
SLICELAB_API int sl_torus_poly_q(const sl_torus_poly* p);
SLICELAB_API sl_status sl_torus_poly_numerators(const sl_torus_poly* p, uint64_t* out);

SLICELAB_API sl_status sl_additive_derivative(const sl_torus_poly* p, uint64_t h,
                                              sl_torus_poly** out);
/* all order-(d+1) additive derivatives vanish identically (basis-direction
 * multisets; equivalent to all directions) */
SLICELAB_API sl_status sl_verify_degree(const sl_torus_poly* p, int d, int* out);
/* same predicate over every direction tuple; dim*(d+1) <= 24 */
SLICELAB_API sl_status sl_verify_degree_full(const sl_torus_poly* p, int d, int* out);
/* x -> j(|x|-a)/2^d mod 1 on {0,1}^{2n} */
SLICELAB_API sl_status sl_weight_polynomial(int n, uint32_t j, int d, int a,
                                            sl_torus_poly** out);
/* pointwise-exact: 1_{|x| = 0 mod 2^d} = 2^{-d} sum_j e^{2 pi i j|x|/2^d};
 * dim <= 20 */
SLICELAB_API sl_status sl_residue_decomposition_check(int dim, int d, int* out);

typedef struct sl_correlation {
  double re;
  double im;
  double magnitude;
} sl_correlation;

/* E over the domain of (-1)^{f(x)} e^{2 pi i p(x)}; f 0/1-valued there */
SLICELAB_API sl_status sl_correlation_f_p(const sl_table* f, const sl_torus_poly* p,
                                          const sl_domain* domain, sl_correlation* out);
/* E over the domain of e^{2 pi i P(x)} */
SLICELAB_API sl_status sl_polynomial_bias(const sl_torus_poly* P, const sl_domain* domain,
                                          sl_correlation* out);

/* searches j < 2^d with full-cube bias of P + j|x|/2^d at least
 * delta*density(D_{2n,d+1})/2; profile (length 2^d, optional) receives the
 * bias of every j even on SL_ERR_NO_WITNESS. 2n <= 16. */
SLICELAB_API sl_status sl_biased_rank_witness(const sl_torus_poly* P, int n, int d,
                                              double delta, uint32_t* j, double* bias,
                                              double* profile);

/* ------------------------------------------------------------------ */
/* selftest                                                            */

typedef void (*sl_write_fn)(const char* line, void* user);

/* runs the exhaustive invariant suite at dims <= 8; emits one line per
 * check through write (if non-NULL); returns SL_OK only if all pass */
SLICELAB_API sl_status sl_selftest(sl_write_fn write, void* user);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SLICELAB_SLICELAB_H */
