/* topsim — bilinear similarity learning for top-precision retrieval.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns a
 * topsim_status and leaves a human-readable message in topsim_last_error()
 * on failure. Handles are immutable after creation and may be shared across
 * threads; the error message is thread-local.
 */
#ifndef TOPSIM_H
#define TOPSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TOPSIM_BUILD)
#    define TOPSIM_API __declspec(dllexport)
#  else
#    define TOPSIM_API __declspec(dllimport)
#  endif
#else
#  define TOPSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum topsim_status {
    TOPSIM_OK = 0,
    TOPSIM_ERR_INVALID_ARGUMENT = 1,
    TOPSIM_ERR_IO = 2,
    TOPSIM_ERR_PARSE = 3,
    TOPSIM_ERR_DIMENSION_MISMATCH = 4,
    TOPSIM_ERR_NO_EVALUABLE_QUERIES = 5,
    TOPSIM_ERR_NUMERIC = 6
} topsim_status;

TOPSIM_API const char* topsim_version(void);
TOPSIM_API const char* topsim_status_name(topsim_status status);

/* Message of the most recent failed call on this thread ("" when none). */
TOPSIM_API const char* topsim_last_error(void);

/* Frees strings returned through char** out-parameters. */
TOPSIM_API void topsim_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Feature matrices: rows of equal-dimension vectors.                  */

typedef struct topsim_features topsim_features;

TOPSIM_API topsim_status topsim_features_create(const double* values, size_t rows, size_t dim,
                                                topsim_features** out);
/* Headerless CSV, one vector per row, decimal floating-point fields. */
TOPSIM_API topsim_status topsim_features_load_csv(const char* path, topsim_features** out);
TOPSIM_API topsim_status topsim_features_save_csv(const topsim_features* features,
                                                  const char* path);
TOPSIM_API size_t topsim_features_rows(const topsim_features* features);
TOPSIM_API size_t topsim_features_dim(const topsim_features* features);
TOPSIM_API topsim_status topsim_features_get_row(const topsim_features* features, size_t row,
                                                 double* out, size_t len);
TOPSIM_API void topsim_features_free(topsim_features* features);

/* ------------------------------------------------------------------ */
/* Datasets: queries, database and a binary relevance matrix.          */

typedef struct topsim_dataset topsim_dataset;

/* relevance: rows(queries) x rows(database) row-major array of 0/1. */
TOPSIM_API topsim_status topsim_dataset_create(const topsim_features* queries,
                                               const topsim_features* database,
                                               const int32_t* relevance, topsim_dataset** out);
TOPSIM_API topsim_status topsim_dataset_load(const char* queries_csv, const char* database_csv,
                                             const char* relevance_csv, topsim_dataset** out);
TOPSIM_API topsim_status topsim_dataset_save(const topsim_dataset* ds, const char* queries_csv,
                                             const char* database_csv, const char* relevance_csv);
/* kind: "separable" or "rotated_correlation" (alias "rotated"). */
TOPSIM_API topsim_status topsim_dataset_generate(const char* kind, size_t n, size_t m, size_t d,
                                                 size_t relevant_per_query, double noise,
                                                 uint64_t seed, topsim_dataset** out);
TOPSIM_API size_t topsim_dataset_num_queries(const topsim_dataset* ds);
TOPSIM_API size_t topsim_dataset_num_database(const topsim_dataset* ds);
TOPSIM_API size_t topsim_dataset_dim(const topsim_dataset* ds);
TOPSIM_API void topsim_dataset_free(topsim_dataset* ds);

/* ------------------------------------------------------------------ */
/* Models: the d x d scoring matrix W with metadata.                   */

typedef struct topsim_model topsim_model;

TOPSIM_API topsim_status topsim_model_identity(size_t d, topsim_model** out);
TOPSIM_API topsim_status topsim_model_load(const char* path, topsim_model** out);
TOPSIM_API topsim_status topsim_model_save(const topsim_model* model, const char* path);
TOPSIM_API size_t topsim_model_dim(const topsim_model* model);
/* out receives the row-major d*d weights; len must be >= d*d. */
TOPSIM_API topsim_status topsim_model_get_weights(const topsim_model* model, double* out,
                                                  size_t len);
TOPSIM_API void topsim_model_free(topsim_model* model);

/* ------------------------------------------------------------------ */
/* Training and evaluation.                                            */

/* Deterministic disjoint covering split of 0..n-1; the test side gets
 * round(n * test_fraction) queries clamped to [1, n-1]. train_out and
 * test_out must each hold n entries; the used lengths are written back. */
TOPSIM_API topsim_status topsim_split_queries(size_t n, double test_fraction, uint64_t seed,
                                              size_t* train_out, size_t* train_len,
                                              size_t* test_out, size_t* test_len);

typedef struct topsim_train_options {
    double c;               /* trade-off, > 0 */
    size_t max_iterations;
    double rel_tol;         /* relative dual-objective change */
    double kkt_tol;         /* KKT residual tolerance */
    int normalize;          /* L2-normalize features before training */
    size_t cap_per_pair;    /* 0 disables the working set */
    size_t refresh_every;   /* working-set refresh period */
} topsim_train_options;

/* Fills the defaults: c=1, max_iterations=10000, rel_tol=1e-8, kkt_tol=1e-6,
 * normalize=0, cap_per_pair=0, refresh_every=200. */
TOPSIM_API void topsim_train_options_init(topsim_train_options* options);

/* Trains on the given query indices. On success *model_out receives the
 * trained model and, when report_json_out is non-NULL, *report_json_out a
 * JSON training report (free with topsim_string_free). */
TOPSIM_API topsim_status topsim_train(const topsim_dataset* ds, const size_t* train_indices,
                                      size_t train_count, const topsim_train_options* options,
                                      topsim_model** model_out, char** report_json_out);

/* Evaluates mean top precision over the given queries (NULL, 0 = all).
 * *report_json_out receives a JSON report; free with topsim_string_free. */
TOPSIM_API topsim_status topsim_evaluate(const topsim_dataset* ds, const topsim_model* model,
                                         const size_t* query_indices, size_t query_count,
                                         char** report_json_out);

/* Scores one query against every database row. order_out receives the
 * database indices sorted by descending score (ties toward the lower index),
 * scores_out the raw scores in database order; both must hold rows(database)
 * entries. Honors the model's preprocessing flags. */
TOPSIM_API topsim_status topsim_rank(const topsim_model* model, const topsim_features* database,
                                     const double* query, size_t dim, size_t* order_out,
                                     double* scores_out);

#ifdef __cplusplus
}
#endif

#endif /* TOPSIM_H */
