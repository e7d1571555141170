#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "core/types.hpp"

namespace topsim {

/// The highest-scoring irrelevant item of one query, or nullopt when every
/// item is relevant. Ties go to the lower index.
std::optional<std::size_t> top_irrelevant_index(std::span<const double> scores,
                                                std::span<const std::uint8_t> relevance_row);

/// Fraction of relevant items scored strictly above the top irrelevant item.
/// Returns 1.0 when there is no irrelevant item and nullopt (undefined) when
/// there is no relevant item.
std::optional<double> top_precision(std::span<const double> scores,
                                    std::span<const std::uint8_t> relevance_row);

struct QueryTopPrecision {
    std::size_t query;
    double value;
};

struct MeanTopPrecision {
    double mean = 0.0;
    std::vector<QueryTopPrecision> per_query;  // evaluable queries, in subset order
    std::vector<std::size_t> skipped;          // queries without relevant items
};

/// Mean of top_precision over the evaluable queries of the subset. Throws
/// NoEvaluableQueriesError when every query gets skipped.
MeanTopPrecision mean_top_precision(const RetrievalDataset& ds, const SimilarityModel& model,
                                    std::span<const std::size_t> query_subset);

/// Margin hinge loss of one relevant pair (i, j):
/// max(0, max over irrelevant k of z_i' W (x_k - x_j) + 1), and 0 when no
/// irrelevant item exists.
double hinge_loss(const RetrievalDataset& ds, const SimilarityModel& model, std::size_t query,
                  std::size_t relevant);

/// Regularized objective: 0.5 * ||W||_F^2 + c * sum of hinge losses over all
/// relevant pairs.
double primal_objective(const RetrievalDataset& ds, const SimilarityModel& model, double c);

}  // namespace topsim
