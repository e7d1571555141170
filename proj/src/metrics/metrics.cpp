#include "metrics/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "core/error.hpp"
#include "similarity/similarity.hpp"

namespace topsim {

namespace {

void check_lengths(std::span<const double> scores, std::span<const std::uint8_t> relevance_row) {
    if (scores.size() != relevance_row.size()) {
        std::ostringstream os;
        os << "scores length " << scores.size() << " does not match relevance length "
           << relevance_row.size();
        throw DimensionError(os.str());
    }
}

}  // namespace

std::optional<std::size_t> top_irrelevant_index(std::span<const double> scores,
                                                std::span<const std::uint8_t> relevance_row) {
    check_lengths(scores, relevance_row);
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (relevance_row[k] != 0) continue;
        if (!best || scores[k] > scores[*best]) best = k;
    }
    return best;
}

std::optional<double> top_precision(std::span<const double> scores,
                                    std::span<const std::uint8_t> relevance_row) {
    check_lengths(scores, relevance_row);
    std::size_t relevant_count = 0;
    for (std::uint8_t y : relevance_row) {
        if (y != 0) ++relevant_count;
    }
    if (relevant_count == 0) return std::nullopt;

    const std::optional<std::size_t> phi = top_irrelevant_index(scores, relevance_row);
    if (!phi) return 1.0;  // no irrelevant item: every relevant item vacuously precedes it

    const double threshold = scores[*phi];
    std::size_t above = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (relevance_row[j] != 0 && scores[j] > threshold) ++above;  // strict inequality
    }
    return static_cast<double>(above) / static_cast<double>(relevant_count);
}

MeanTopPrecision mean_top_precision(const RetrievalDataset& ds, const SimilarityModel& model,
                                    std::span<const std::size_t> query_subset) {
    require_valid(ds);
    if (query_subset.empty()) throw InvalidArgumentError("empty query subset");
    std::vector<std::size_t> seen(ds.num_queries(), 0);
    for (std::size_t i : query_subset) {
        if (i >= ds.num_queries()) {
            std::ostringstream os;
            os << "query index " << i << " out of range (n=" << ds.num_queries() << ")";
            throw InvalidArgumentError(os.str());
        }
        if (seen[i]++) {
            std::ostringstream os;
            os << "duplicate query index " << i;
            throw InvalidArgumentError(os.str());
        }
    }

    const std::size_t m = ds.num_database();
    MeanTopPrecision result;
    double sum = 0.0;
    for (std::size_t i : query_subset) {
        const std::vector<double> scores = score_all(ds.queries[i], ds, model);
        const std::span<const std::uint8_t> row(ds.relevance.data() + i * m, m);
        const std::optional<double> tp = top_precision(scores, row);
        if (!tp) {
            result.skipped.push_back(i);
            continue;
        }
        result.per_query.push_back(QueryTopPrecision{i, *tp});
        sum += *tp;
    }
    if (result.per_query.empty()) throw NoEvaluableQueriesError("no evaluable queries");
    result.mean = sum / static_cast<double>(result.per_query.size());
    return result;
}

double hinge_loss(const RetrievalDataset& ds, const SimilarityModel& model, std::size_t query,
                  std::size_t relevant) {
    require_valid(ds);
    if (query >= ds.num_queries() || relevant >= ds.num_database() ||
        !ds.relevant(query, relevant)) {
        throw InvalidArgumentError("not a relevant pair");
    }
    const std::vector<double> scores = score_all(ds.queries[query], ds, model);
    bool any_irrelevant = false;
    double worst = 0.0;
    for (std::size_t k = 0; k < ds.num_database(); ++k) {
        if (ds.relevant(query, k)) continue;
        const double violation = scores[k] - scores[relevant] + 1.0;
        if (!any_irrelevant || violation > worst) worst = violation;
        any_irrelevant = true;
    }
    if (!any_irrelevant) return 0.0;  // no constraint to violate
    return std::max(0.0, worst);
}

double primal_objective(const RetrievalDataset& ds, const SimilarityModel& model, double c) {
    if (!(c > 0.0)) throw InvalidArgumentError("C must be positive");
    require_valid(ds);
    double frob = 0.0;
    for (double w : model.weights) frob += w * w;
    double slack = 0.0;
    for (std::size_t i = 0; i < ds.num_queries(); ++i) {
        for (std::size_t j = 0; j < ds.num_database(); ++j) {
            if (ds.relevant(i, j)) slack += hinge_loss(ds, model, i, j);
        }
    }
    return 0.5 * frob + c * slack;
}

}  // namespace topsim
