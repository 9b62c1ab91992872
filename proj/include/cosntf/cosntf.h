/* C interface to the cosntf shared library.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function (NULL is accepted). Functions return a
 * cosntf_status; on failure cosntf_last_error() describes the problem for the
 * calling thread. Index sets cross this boundary 1-based.
 */
#ifndef COSNTF_H
#define COSNTF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define COSNTF_API __declspec(dllexport)
#else
#define COSNTF_API __attribute__((visibility("default")))
#endif

typedef struct cosntf_tensor cosntf_tensor;
typedef struct cosntf_selection cosntf_selection;
typedef struct cosntf_model cosntf_model;

typedef enum cosntf_status {
  COSNTF_OK = 0,
  COSNTF_ERR_INVALID_ARGUMENT = 1,
  COSNTF_ERR_DIMENSION = 2,
  COSNTF_ERR_INDEX = 3,
  COSNTF_ERR_IO = 4,
  COSNTF_ERR_FORMAT = 5,
  COSNTF_ERR_CONVERGENCE = 6,
  COSNTF_ERR_SINGULAR = 7,
  COSNTF_ERR_SAMPLING = 8,
  COSNTF_ERR_INTERNAL = 9
} cosntf_status;

COSNTF_API const char* cosntf_version(void);
COSNTF_API const char* cosntf_status_string(cosntf_status status);
/* Message of the last failed call on this thread ("" if none). */
COSNTF_API const char* cosntf_last_error(void);

/* ---- tensors ------------------------------------------------------------ */

/* data holds m*n*p values in storage order (slice-major, row-major inside a
 * frontal slice); NULL gives the zero tensor. */
COSNTF_API cosntf_status cosntf_tensor_create(size_t m, size_t n, size_t p, const double* data,
                                              cosntf_tensor** out);
COSNTF_API void cosntf_tensor_free(cosntf_tensor* t);
COSNTF_API cosntf_status cosntf_tensor_dims(const cosntf_tensor* t, size_t* m, size_t* n,
                                            size_t* p);
/* Copies the entries out; len must be at least m*n*p. */
COSNTF_API cosntf_status cosntf_tensor_copy_data(const cosntf_tensor* t, double* out, size_t len);
/* 1-based (i, j, k). */
COSNTF_API cosntf_status cosntf_tensor_get(const cosntf_tensor* t, size_t i, size_t j, size_t k,
                                           double* out);
COSNTF_API cosntf_status cosntf_tensor_read(const char* path, cosntf_tensor** out);
COSNTF_API cosntf_status cosntf_tensor_write(const cosntf_tensor* t, const char* path);
COSNTF_API cosntf_status cosntf_tprod(const cosntf_tensor* a, const cosntf_tensor* b,
                                      cosntf_tensor** out);
/* ||a - b||_F / ||a||_F */
COSNTF_API cosntf_status cosntf_rel_error(const cosntf_tensor* a, const cosntf_tensor* b,
                                          double* out);

/* ---- synthetic data ----------------------------------------------------- */

typedef struct cosntf_synth_spec {
  size_t m, n, p, r1, r2;
  double noise;
  double slice_sum;
  uint64_t seed;
} cosntf_synth_spec;

/* 100 x 100 x 10, co-(10, 3), no noise, slice sums 100, seed 0. */
COSNTF_API void cosntf_synth_default(cosntf_synth_spec* spec);
/* noiseless and truth may be NULL. */
COSNTF_API cosntf_status cosntf_gen_synthetic(const cosntf_synth_spec* spec, cosntf_tensor** tensor,
                                              cosntf_tensor** noiseless,
                                              cosntf_selection** truth);

/* ---- index selection ---------------------------------------------------- */

typedef enum cosntf_method {
  COSNTF_METHOD_COSNTF = 0,
  COSNTF_METHOD_TCUR = 1,
  COSNTF_METHOD_HYBRID = 2
} cosntf_method;

typedef enum cosntf_dist {
  COSNTF_DIST_UNIFORM = 0,
  COSNTF_DIST_SLICE = 1,
  COSNTF_DIST_LEVERAGE = 2
} cosntf_dist;

typedef struct cosntf_select_options {
  cosntf_method method;
  cosntf_dist dist;       /* t-CUR sampling only */
  size_t r1, r2;
  uint64_t seed;          /* t-CUR and hybrid */
  double delta;
  int maxiter;
  double lambda;
  int swap_pairing;       /* t-CUR: I from t-DEIM(V), J from t-DEIM(W) */
} cosntf_select_options;

/* cosntf, uniform, r1 = 10, r2 = 3, seed 0, delta 1e-6, maxiter 50, lambda 0.25. */
COSNTF_API void cosntf_select_defaults(cosntf_select_options* opts);
COSNTF_API cosntf_status cosntf_select(const cosntf_tensor* t, const cosntf_select_options* opts,
                                       cosntf_selection** out);

COSNTF_API cosntf_status cosntf_selection_create(const size_t* I, size_t nI, const size_t* J,
                                                 size_t nJ, cosntf_selection** out);
COSNTF_API void cosntf_selection_free(cosntf_selection* s);
COSNTF_API cosntf_status cosntf_selection_sizes(const cosntf_selection* s, size_t* nI, size_t* nJ);
/* Fills caller buffers of the sizes above with 1-based indices. */
COSNTF_API cosntf_status cosntf_selection_indices(const cosntf_selection* s, size_t* I, size_t* J);
/* Outer iterations and convergence flag of the selector (1/1 when read from file). */
COSNTF_API cosntf_status cosntf_selection_info(const cosntf_selection* s, int* outer_iterations,
                                               int* converged);
COSNTF_API cosntf_status cosntf_selection_read(const char* path, cosntf_selection** out);
COSNTF_API cosntf_status cosntf_selection_write(const cosntf_selection* s, const char* path);

/* ---- factor recovery ---------------------------------------------------- */

typedef struct cosntf_recover_options {
  int maxiter;
  double delta;
  int use_hals; /* coordinate descent instead of the active-set solver */
} cosntf_recover_options;

/* maxiter 100, delta 1e-6, active set. */
COSNTF_API void cosntf_recover_defaults(cosntf_recover_options* opts);
COSNTF_API cosntf_status cosntf_recover(const cosntf_tensor* t, const cosntf_selection* s,
                                        const cosntf_recover_options* opts, cosntf_model** out);
COSNTF_API void cosntf_model_free(cosntf_model* mdl);
COSNTF_API cosntf_status cosntf_model_p1(const cosntf_model* mdl, cosntf_tensor** out);
COSNTF_API cosntf_status cosntf_model_core(const cosntf_model* mdl, cosntf_tensor** out);
COSNTF_API cosntf_status cosntf_model_p2(const cosntf_model* mdl, cosntf_tensor** out);
COSNTF_API cosntf_status cosntf_model_reconstruct(const cosntf_model* mdl, cosntf_tensor** out);
COSNTF_API cosntf_status cosntf_model_info(const cosntf_model* mdl, int* iterations,
                                           int* converged);

/* ---- images ------------------------------------------------------------- */

/* Every .pgm in dir becomes a lateral slice; height = width = 0 keeps the size. */
COSNTF_API cosntf_status cosntf_ingest_images(const char* dir, size_t height, size_t width,
                                              cosntf_tensor** out);

/* ---- noise sweep -------------------------------------------------------- */

typedef struct cosntf_sweep_config {
  cosntf_synth_spec base;     /* noise and seed are ignored */
  const double* noise_levels; /* NULL: 1e-7 ... 1e-1 */
  size_t n_levels;
  int trials;
  const char* methods;        /* comma separated; NULL: all five */
  uint64_t seed;
  double delta;
  int maxiter;
  double lambda;
  int recover_maxiter;
  double recover_delta;
  int timing;                 /* write measured wall_ms instead of 0 */
} cosntf_sweep_config;

COSNTF_API void cosntf_sweep_defaults(cosntf_sweep_config* cfg);
COSNTF_API cosntf_status cosntf_sweep_run(const cosntf_sweep_config* cfg, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* COSNTF_H */
