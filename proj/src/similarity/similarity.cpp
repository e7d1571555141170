#include "similarity/similarity.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace topsim {

namespace {

void check_dim(const FeatureVector& v, std::size_t d, const char* what) {
    if (v.size() != d) {
        std::ostringstream os;
        os << what << " has dimension " << v.size() << ", model expects " << d;
        throw DimensionError(os.str());
    }
}

}  // namespace

double score(const FeatureVector& z, const FeatureVector& x, const SimilarityModel& model) {
    const std::size_t d = model.dim;
    check_dim(z, d, "query vector");
    check_dim(x, d, "database vector");
    double acc = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
        double row = 0.0;
        const double* w = model.weights.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) row += w[c] * x[c];
        acc += z[r] * row;
    }
    return acc;
}

std::vector<double> score_all(const FeatureVector& z, const RetrievalDataset& ds,
                              const SimilarityModel& model) {
    std::vector<double> out;
    out.reserve(ds.num_database());
    for (std::size_t j = 0; j < ds.num_database(); ++j) {
        out.push_back(score(z, ds.database[j], model));
    }
    return out;
}

RankingResult rank_database(const FeatureVector& z, const RetrievalDataset& ds,
                            const SimilarityModel& model) {
    RankingResult result;
    result.scores = score_all(z, ds, model);
    result.order.resize(result.scores.size());
    std::iota(result.order.begin(), result.order.end(), std::size_t{0});
    std::sort(result.order.begin(), result.order.end(), [&](std::size_t a, std::size_t b) {
        if (result.scores[a] != result.scores[b]) return result.scores[a] > result.scores[b];
        return a < b;
    });
    return result;
}

}  // namespace topsim
