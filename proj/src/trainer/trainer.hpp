#pragma once

#include <span>

#include "core/types.hpp"
#include "metrics/metrics.hpp"
#include "qp/solver.hpp"

namespace topsim {

struct TrainOutcome {
    SimilarityModel model;
    DualSolution solution;
    CertificateReport certificate;
    std::size_t triplet_count = 0;
    std::size_t group_count = 0;
    bool no_triplets = false;  // warning: no constraints, W = 0 returned
};

/// Full training pipeline on the given query subset: triplet enumeration,
/// dual solve, weight recovery and certification. When normalize is set the
/// features are L2-normalized first and the model records that.
TrainOutcome train(const RetrievalDataset& ds, std::span<const std::size_t> train_query_indices,
                   const SolverConfig& cfg, bool normalize = false);

/// W = I baseline; scoring reduces to the plain inner product.
SimilarityModel baseline_identity(std::size_t d);

struct EvaluationReport {
    double mean_top_precision = 0.0;
    std::vector<QueryTopPrecision> per_query;
    std::vector<std::size_t> skipped;
    Provenance provenance = Provenance::External;
    std::size_t dim = 0;
};

/// Mean top precision of the model over the given queries, honoring the
/// model's preprocessing flags.
EvaluationReport evaluate(const RetrievalDataset& ds, const SimilarityModel& model,
                          std::span<const std::size_t> query_indices);

struct QuerySplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Deterministic disjoint covering split of 0..n-1. The test side gets
/// round(n * test_fraction) queries, clamped to [1, n-1]; both sides are
/// returned in ascending order.
QuerySplit split_queries(std::size_t n, double test_fraction, std::uint64_t seed);

/// Returns a copy of the dataset with every feature vector L2-normalized
/// (zero vectors are left unchanged).
RetrievalDataset normalize_features(const RetrievalDataset& ds);

}  // namespace topsim
