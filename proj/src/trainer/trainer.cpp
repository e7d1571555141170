#include "trainer/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "qp/gram.hpp"

namespace topsim {

namespace {

void normalize_vector(FeatureVector& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    for (double& x : v) x /= norm;
}

}  // namespace

RetrievalDataset normalize_features(const RetrievalDataset& ds) {
    RetrievalDataset out = ds;
    for (FeatureVector& q : out.queries) normalize_vector(q);
    for (FeatureVector& x : out.database) normalize_vector(x);
    return out;
}

TrainOutcome train(const RetrievalDataset& ds, std::span<const std::size_t> train_query_indices,
                   const SolverConfig& cfg, bool normalize) {
    require_valid(ds);
    if (train_query_indices.empty()) throw InvalidArgumentError("empty training query list");

    const RetrievalDataset working = normalize ? normalize_features(ds) : ds;

    TrainOutcome outcome;
    const TripletSet ts = enumerate_triplets(working, 0, train_query_indices);
    outcome.triplet_count = ts.size();
    outcome.group_count = ts.groups.size();

    if (ts.empty()) {
        outcome.no_triplets = true;
        outcome.model = SimilarityModel::zero(working.dimension(), Provenance::Trained);
        outcome.solution.c = cfg.c;
        outcome.solution.converged = true;
        outcome.solution.objective_history.push_back(0.0);
        outcome.certificate = certify(outcome.solution, ts, working, cfg.kkt_tol);
    } else {
        const GramOracle oracle(working);
        outcome.solution = solve_dual(ts, oracle, cfg);
        outcome.model = recover_weights(outcome.solution.beta, ts, working);
        outcome.certificate = certify(outcome.solution, ts, working, cfg.kkt_tol);
    }
    outcome.model.trained_c = cfg.c;
    outcome.model.normalize = normalize;
    return outcome;
}

SimilarityModel baseline_identity(std::size_t d) {
    if (d == 0) throw InvalidArgumentError("dimension must be positive");
    return SimilarityModel::identity(d);
}

EvaluationReport evaluate(const RetrievalDataset& ds, const SimilarityModel& model,
                          std::span<const std::size_t> query_indices) {
    require_valid(ds);
    if (model.dim != ds.dimension()) {
        throw DimensionError("model dimension " + std::to_string(model.dim) +
                             " does not match dataset dimension " +
                             std::to_string(ds.dimension()));
    }
    const MeanTopPrecision mtp =
        model.normalize ? mean_top_precision(normalize_features(ds), model, query_indices)
                        : mean_top_precision(ds, model, query_indices);
    EvaluationReport report;
    report.mean_top_precision = mtp.mean;
    report.per_query = mtp.per_query;
    report.skipped = mtp.skipped;
    report.provenance = model.provenance;
    report.dim = model.dim;
    return report;
}

QuerySplit split_queries(std::size_t n, double test_fraction, std::uint64_t seed) {
    if (n < 2) throw InvalidArgumentError("need at least 2 queries to split");
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        throw InvalidArgumentError("test_fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    const double exact = static_cast<double>(n) * test_fraction;
    std::size_t test_size = static_cast<std::size_t>(std::llround(exact));
    test_size = std::clamp<std::size_t>(test_size, 1, n - 1);

    QuerySplit split;
    split.test.assign(order.begin(), order.begin() + test_size);
    split.train.assign(order.begin() + test_size, order.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

}  // namespace topsim
