#include "topsim/topsim.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <string>

#include "core/error.hpp"
#include "core/types.hpp"
#include "dataio/csv.hpp"
#include "dataio/model_io.hpp"
#include "dataio/synth.hpp"
#include "report/report.hpp"
#include "similarity/similarity.hpp"
#include "trainer/trainer.hpp"

struct topsim_features {
    std::vector<topsim::FeatureVector> rows;
};

struct topsim_dataset {
    topsim::RetrievalDataset ds;
};

struct topsim_model {
    topsim::SimilarityModel model;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
topsim_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TOPSIM_OK;
    } catch (const topsim::InvalidArgumentError& e) {
        set_error(e.what());
        return TOPSIM_ERR_INVALID_ARGUMENT;
    } catch (const topsim::IoError& e) {
        set_error(e.what());
        return TOPSIM_ERR_IO;
    } catch (const topsim::ParseError& e) {
        set_error(e.what());
        return TOPSIM_ERR_PARSE;
    } catch (const topsim::DimensionError& e) {
        set_error(e.what());
        return TOPSIM_ERR_DIMENSION_MISMATCH;
    } catch (const topsim::NoEvaluableQueriesError& e) {
        set_error(e.what());
        return TOPSIM_ERR_NO_EVALUABLE_QUERIES;
    } catch (const topsim::NumericError& e) {
        set_error(e.what());
        return TOPSIM_ERR_NUMERIC;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TOPSIM_ERR_INVALID_ARGUMENT;
    }
}

void require_nonnull(const void* p, const char* what) {
    if (p == nullptr) throw topsim::InvalidArgumentError(std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void validate_features(const std::vector<topsim::FeatureVector>& rows) {
    if (rows.empty()) throw topsim::InvalidArgumentError("feature matrix has no rows");
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw topsim::InvalidArgumentError("feature vectors must be non-empty");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != dim) {
            throw topsim::DimensionError("dimension mismatch at row " + std::to_string(r));
        }
        for (double x : rows[r]) {
            if (!std::isfinite(x)) {
                throw topsim::InvalidArgumentError("non-finite value at row " + std::to_string(r));
            }
        }
    }
}

topsim::SolverConfig solver_config_from(const topsim_train_options& options) {
    topsim::SolverConfig cfg;
    cfg.c = options.c;
    cfg.max_iterations = options.max_iterations;
    cfg.rel_tol = options.rel_tol;
    cfg.kkt_tol = options.kkt_tol;
    if (options.cap_per_pair > 0) {
        cfg.working_set = topsim::WorkingSetConfig{options.cap_per_pair,
                                                   options.refresh_every ? options.refresh_every
                                                                         : 200};
    }
    return cfg;
}

}  // namespace

extern "C" {

const char* topsim_version(void) { return "0.1.0"; }

const char* topsim_status_name(topsim_status status) {
    switch (status) {
        case TOPSIM_OK: return "ok";
        case TOPSIM_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case TOPSIM_ERR_IO: return "io_error";
        case TOPSIM_ERR_PARSE: return "parse_error";
        case TOPSIM_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case TOPSIM_ERR_NO_EVALUABLE_QUERIES: return "no_evaluable_queries";
        case TOPSIM_ERR_NUMERIC: return "numeric_error";
    }
    return "unknown";
}

const char* topsim_last_error(void) { return g_last_error.c_str(); }

void topsim_string_free(char* s) { delete[] s; }

topsim_status topsim_features_create(const double* values, size_t rows, size_t dim,
                                     topsim_features** out) {
    return guarded([&] {
        require_nonnull(values, "values");
        require_nonnull(out, "out");
        auto handle = std::make_unique<topsim_features>();
        handle->rows.reserve(rows);
        for (size_t r = 0; r < rows; ++r) {
            handle->rows.emplace_back(values + r * dim, values + (r + 1) * dim);
        }
        validate_features(handle->rows);
        *out = handle.release();
    });
}

topsim_status topsim_features_load_csv(const char* path, topsim_features** out) {
    return guarded([&] {
        require_nonnull(path, "path");
        require_nonnull(out, "out");
        auto handle = std::make_unique<topsim_features>();
        handle->rows = topsim::load_features_csv(path);
        validate_features(handle->rows);
        *out = handle.release();
    });
}

topsim_status topsim_features_save_csv(const topsim_features* features, const char* path) {
    return guarded([&] {
        require_nonnull(features, "features");
        require_nonnull(path, "path");
        topsim::save_features_csv(features->rows, path);
    });
}

size_t topsim_features_rows(const topsim_features* features) {
    return features ? features->rows.size() : 0;
}

size_t topsim_features_dim(const topsim_features* features) {
    return features && !features->rows.empty() ? features->rows.front().size() : 0;
}

topsim_status topsim_features_get_row(const topsim_features* features, size_t row, double* out,
                                      size_t len) {
    return guarded([&] {
        require_nonnull(features, "features");
        require_nonnull(out, "out");
        if (row >= features->rows.size()) {
            throw topsim::InvalidArgumentError("row index out of range");
        }
        const topsim::FeatureVector& v = features->rows[row];
        if (len < v.size()) throw topsim::InvalidArgumentError("output buffer too small");
        std::copy(v.begin(), v.end(), out);
    });
}

void topsim_features_free(topsim_features* features) { delete features; }

topsim_status topsim_dataset_create(const topsim_features* queries,
                                    const topsim_features* database, const int32_t* relevance,
                                    topsim_dataset** out) {
    return guarded([&] {
        require_nonnull(queries, "queries");
        require_nonnull(database, "database");
        require_nonnull(relevance, "relevance");
        require_nonnull(out, "out");
        auto handle = std::make_unique<topsim_dataset>();
        handle->ds.queries = queries->rows;
        handle->ds.database = database->rows;
        const std::size_t n = handle->ds.num_queries();
        const std::size_t m = handle->ds.num_database();
        handle->ds.relevance.resize(n * m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const int32_t y = relevance[i * m + j];
                if (y != 0 && y != 1) {
                    std::ostringstream os;
                    os << "non-binary relevance at (" << i << "," << j << ")";
                    throw topsim::InvalidArgumentError(os.str());
                }
                handle->ds.relevance[i * m + j] = static_cast<std::uint8_t>(y);
            }
        }
        topsim::require_valid(handle->ds);
        *out = handle.release();
    });
}

topsim_status topsim_dataset_load(const char* queries_csv, const char* database_csv,
                                  const char* relevance_csv, topsim_dataset** out) {
    return guarded([&] {
        require_nonnull(queries_csv, "queries_csv");
        require_nonnull(database_csv, "database_csv");
        require_nonnull(relevance_csv, "relevance_csv");
        require_nonnull(out, "out");
        auto handle = std::make_unique<topsim_dataset>();
        handle->ds = topsim::load_dataset(queries_csv, database_csv, relevance_csv);
        *out = handle.release();
    });
}

topsim_status topsim_dataset_save(const topsim_dataset* ds, const char* queries_csv,
                                  const char* database_csv, const char* relevance_csv) {
    return guarded([&] {
        require_nonnull(ds, "ds");
        require_nonnull(queries_csv, "queries_csv");
        require_nonnull(database_csv, "database_csv");
        require_nonnull(relevance_csv, "relevance_csv");
        topsim::save_dataset(ds->ds, queries_csv, database_csv, relevance_csv);
    });
}

topsim_status topsim_dataset_generate(const char* kind, size_t n, size_t m, size_t d,
                                      size_t relevant_per_query, double noise, uint64_t seed,
                                      topsim_dataset** out) {
    return guarded([&] {
        require_nonnull(kind, "kind");
        require_nonnull(out, "out");
        topsim::SynthParams params;
        const std::string kind_name(kind);
        if (kind_name == "separable") {
            params.kind = topsim::SynthKind::Separable;
        } else if (kind_name == "rotated_correlation" || kind_name == "rotated") {
            params.kind = topsim::SynthKind::RotatedCorrelation;
        } else {
            throw topsim::InvalidArgumentError("unknown synthetic kind '" + kind_name + "'");
        }
        params.n = n;
        params.m = m;
        params.d = d;
        params.relevant_per_query = relevant_per_query;
        params.noise = noise;
        params.seed = seed;
        auto handle = std::make_unique<topsim_dataset>();
        handle->ds = topsim::generate_synthetic(params).dataset;
        *out = handle.release();
    });
}

size_t topsim_dataset_num_queries(const topsim_dataset* ds) {
    return ds ? ds->ds.num_queries() : 0;
}

size_t topsim_dataset_num_database(const topsim_dataset* ds) {
    return ds ? ds->ds.num_database() : 0;
}

size_t topsim_dataset_dim(const topsim_dataset* ds) { return ds ? ds->ds.dimension() : 0; }

void topsim_dataset_free(topsim_dataset* ds) { delete ds; }

topsim_status topsim_model_identity(size_t d, topsim_model** out) {
    return guarded([&] {
        require_nonnull(out, "out");
        auto handle = std::make_unique<topsim_model>();
        handle->model = topsim::baseline_identity(d);
        *out = handle.release();
    });
}

topsim_status topsim_model_load(const char* path, topsim_model** out) {
    return guarded([&] {
        require_nonnull(path, "path");
        require_nonnull(out, "out");
        auto handle = std::make_unique<topsim_model>();
        handle->model = topsim::load_model(path);
        *out = handle.release();
    });
}

topsim_status topsim_model_save(const topsim_model* model, const char* path) {
    return guarded([&] {
        require_nonnull(model, "model");
        require_nonnull(path, "path");
        topsim::save_model(model->model, path);
    });
}

size_t topsim_model_dim(const topsim_model* model) { return model ? model->model.dim : 0; }

topsim_status topsim_model_get_weights(const topsim_model* model, double* out, size_t len) {
    return guarded([&] {
        require_nonnull(model, "model");
        require_nonnull(out, "out");
        if (len < model->model.weights.size()) {
            throw topsim::InvalidArgumentError("output buffer too small");
        }
        std::copy(model->model.weights.begin(), model->model.weights.end(), out);
    });
}

void topsim_model_free(topsim_model* model) { delete model; }

topsim_status topsim_split_queries(size_t n, double test_fraction, uint64_t seed,
                                   size_t* train_out, size_t* train_len, size_t* test_out,
                                   size_t* test_len) {
    return guarded([&] {
        require_nonnull(train_out, "train_out");
        require_nonnull(train_len, "train_len");
        require_nonnull(test_out, "test_out");
        require_nonnull(test_len, "test_len");
        const topsim::QuerySplit split = topsim::split_queries(n, test_fraction, seed);
        std::copy(split.train.begin(), split.train.end(), train_out);
        std::copy(split.test.begin(), split.test.end(), test_out);
        *train_len = split.train.size();
        *test_len = split.test.size();
    });
}

void topsim_train_options_init(topsim_train_options* options) {
    if (options == nullptr) return;
    options->c = 1.0;
    options->max_iterations = 10000;
    options->rel_tol = 1e-8;
    options->kkt_tol = 1e-6;
    options->normalize = 0;
    options->cap_per_pair = 0;
    options->refresh_every = 200;
}

topsim_status topsim_train(const topsim_dataset* ds, const size_t* train_indices,
                           size_t train_count, const topsim_train_options* options,
                           topsim_model** model_out, char** report_json_out) {
    return guarded([&] {
        require_nonnull(ds, "ds");
        require_nonnull(train_indices, "train_indices");
        require_nonnull(options, "options");
        require_nonnull(model_out, "model_out");
        const topsim::SolverConfig cfg = solver_config_from(*options);
        const topsim::TrainOutcome outcome =
            topsim::train(ds->ds, std::span<const size_t>(train_indices, train_count), cfg,
                          options->normalize != 0);
        auto handle = std::make_unique<topsim_model>();
        handle->model = outcome.model;
        if (report_json_out != nullptr) {
            *report_json_out =
                copy_string(topsim::train_report_json(outcome, cfg, options->normalize != 0));
        }
        *model_out = handle.release();
    });
}

topsim_status topsim_evaluate(const topsim_dataset* ds, const topsim_model* model,
                              const size_t* query_indices, size_t query_count,
                              char** report_json_out) {
    return guarded([&] {
        require_nonnull(ds, "ds");
        require_nonnull(model, "model");
        require_nonnull(report_json_out, "report_json_out");
        std::vector<size_t> all;
        std::span<const size_t> subset;
        if (query_indices == nullptr) {
            all.resize(ds->ds.num_queries());
            std::iota(all.begin(), all.end(), size_t{0});
            subset = all;
        } else {
            subset = std::span<const size_t>(query_indices, query_count);
        }
        const topsim::EvaluationReport report = topsim::evaluate(ds->ds, model->model, subset);
        *report_json_out = copy_string(topsim::evaluation_report_json(report));
    });
}

topsim_status topsim_rank(const topsim_model* model, const topsim_features* database,
                          const double* query, size_t dim, size_t* order_out,
                          double* scores_out) {
    return guarded([&] {
        require_nonnull(model, "model");
        require_nonnull(database, "database");
        require_nonnull(query, "query");
        require_nonnull(order_out, "order_out");
        require_nonnull(scores_out, "scores_out");

        topsim::RetrievalDataset ds;
        ds.queries.emplace_back(query, query + dim);
        ds.database = database->rows;
        ds.relevance.assign(ds.database.size(), 0);
        if (model->model.normalize) ds = topsim::normalize_features(ds);

        const topsim::RankingResult ranking =
            topsim::rank_database(ds.queries.front(), ds, model->model);
        std::copy(ranking.order.begin(), ranking.order.end(), order_out);
        std::copy(ranking.scores.begin(), ranking.scores.end(), scores_out);
    });
}

}  // extern "C"
