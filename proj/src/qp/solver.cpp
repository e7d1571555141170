#include "qp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "metrics/metrics.hpp"
#include "qp/projection.hpp"
#include "similarity/similarity.hpp"

namespace topsim {

namespace {

constexpr double kBetaTruncation = 1e-12;
constexpr double kMinLipschitz = 1e-12;
constexpr std::size_t kMaxHalvings = 60;

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.c > 0.0)) throw InvalidArgumentError("C must be positive");
    if (cfg.max_iterations == 0) throw InvalidArgumentError("max_iterations must be positive");
    if (!(cfg.rel_tol > 0.0)) throw InvalidArgumentError("rel_tol must be positive");
    if (!(cfg.kkt_tol > 0.0)) throw InvalidArgumentError("kkt_tol must be positive");
    if (cfg.working_set) {
        if (cfg.working_set->cap_per_pair == 0)
            throw InvalidArgumentError("cap_per_pair must be positive");
        if (cfg.working_set->refresh_every == 0)
            throw InvalidArgumentError("refresh_every must be positive");
    }
}

void project_groupwise(std::span<double> beta, const TripletSet& ts, double c,
                       std::vector<double>& scratch) {
    for (const TripletGroup& g : ts.groups) {
        project_capped_simplex_inplace(std::span<double>(beta.data() + g.begin, g.size()), c,
                                       scratch);
    }
}

/// Infinity norm of beta - P(beta + grad): the fixed-point residual of the
/// projected-gradient map at unit step, zero exactly at KKT points.
double kkt_residual(std::span<const double> beta, std::span<const double> grad,
                    const TripletSet& ts, double c, std::vector<double>& tmp,
                    std::vector<double>& scratch) {
    tmp.assign(beta.begin(), beta.end());
    for (std::size_t t = 0; t < tmp.size(); ++t) tmp[t] += grad[t];
    project_groupwise(tmp, ts, c, scratch);
    double residual = 0.0;
    for (std::size_t t = 0; t < tmp.size(); ++t) {
        residual = std::max(residual, std::abs(tmp[t] - beta[t]));
    }
    return residual;
}

struct AscentResult {
    bool converged = false;
    std::size_t iterations = 0;
    double objective = 0.0;
    double kkt = 0.0;
};

/// Projected-gradient ascent on one triplet set, warm-started from beta.
/// Appends each iterate's objective to history (plus the starting value when
/// history is empty).
AscentResult ascend(const TripletSet& ts, const GramOracle& oracle, const SolverConfig& cfg,
                    std::vector<double>& beta, std::vector<double>& history,
                    std::size_t iteration_budget) {
    const std::size_t t_count = ts.size();
    AscentResult result;

    const double lipschitz = oracle.lipschitz_estimate(ts);
    double eta = 1.0 / std::max(lipschitz, kMinLipschitz);

    std::vector<double> grad(t_count), candidate(t_count), tmp(t_count), scratch;
    double objective = dual_objective(beta, ts, oracle);
    if (!std::isfinite(objective)) throw NumericError("non-finite dual objective");
    if (history.empty()) history.push_back(objective);

    oracle.apply(ts, beta, grad);
    for (std::size_t t = 0; t < t_count; ++t) grad[t] = 1.0 - grad[t];

    for (std::size_t it = 0; it < iteration_budget; ++it) {
        ++result.iterations;

        double step = eta;
        double candidate_objective = objective;
        bool halved = false;
        for (std::size_t attempt = 0; attempt <= kMaxHalvings; ++attempt) {
            for (std::size_t t = 0; t < t_count; ++t) candidate[t] = beta[t] + step * grad[t];
            project_groupwise(candidate, ts, cfg.c, scratch);
            candidate_objective = dual_objective(candidate, ts, oracle);
            if (!std::isfinite(candidate_objective))
                throw NumericError("non-finite dual objective");
            if (candidate_objective >= objective) break;
            step *= 0.5;
            halved = true;
        }
        if (candidate_objective < objective) {
            // No ascent step found within the halving budget; hold position.
            candidate.assign(beta.begin(), beta.end());
            candidate_objective = objective;
        }

        const double change = std::abs(candidate_objective - objective) /
                              std::max(1.0, std::abs(candidate_objective));
        beta.swap(candidate);
        objective = candidate_objective;
        history.push_back(objective);

        oracle.apply(ts, beta, grad);
        for (std::size_t t = 0; t < t_count; ++t) grad[t] = 1.0 - grad[t];
        result.kkt = kkt_residual(beta, grad, ts, cfg.c, tmp, scratch);

        if (halved) {
            eta = step;  // keep the step that worked
        } else if (cfg.step_rule == SolverConfig::StepRule::Backtracking) {
            eta = std::min(eta * 1.25, 1e12);
        }

        if (change < cfg.rel_tol && result.kkt < cfg.kkt_tol) {
            result.converged = true;
            break;
        }
    }
    result.objective = objective;
    return result;
}

/// Per-group selection of triplet indices (into the full set) for the working set.
using Selection = std::vector<std::vector<std::size_t>>;

Selection initial_selection(const TripletSet& ts, std::size_t cap) {
    Selection sel(ts.groups.size());
    for (std::size_t g = 0; g < ts.groups.size(); ++g) {
        const TripletGroup& group = ts.groups[g];
        const std::size_t take = std::min(cap, group.size());
        sel[g].reserve(take);
        for (std::size_t t = group.begin; t < group.begin + take; ++t) sel[g].push_back(t);
    }
    return sel;
}

TripletSet build_subset(const TripletSet& ts, const Selection& sel,
                        std::vector<std::size_t>& sub_to_full) {
    TripletSet sub;
    sub_to_full.clear();
    for (std::size_t g = 0; g < ts.groups.size(); ++g) {
        if (sel[g].empty()) continue;
        TripletGroup group = ts.groups[g];
        group.begin = sub.triplets.size();
        for (std::size_t t : sel[g]) {
            sub.triplets.push_back(ts.triplets[t]);
            sub_to_full.push_back(t);
        }
        group.end = sub.triplets.size();
        sub.groups.push_back(group);
    }
    return sub;
}

/// Top-cap triplets per group by gradient (equivalently by violation
/// z' W (x_k - x_j), which differs from the gradient by a constant).
/// Ties go to the lower k, i.e. the lower triplet index.
Selection select_most_violating(const TripletSet& ts, std::span<const double> grad,
                                std::size_t cap) {
    Selection sel(ts.groups.size());
    std::vector<std::size_t> idx;
    for (std::size_t g = 0; g < ts.groups.size(); ++g) {
        const TripletGroup& group = ts.groups[g];
        idx.resize(group.size());
        std::iota(idx.begin(), idx.end(), group.begin);
        const std::size_t take = std::min(cap, idx.size());
        std::partial_sort(idx.begin(), idx.begin() + take, idx.end(),
                          [&grad](std::size_t a, std::size_t b) {
                              if (grad[a] != grad[b]) return grad[a] > grad[b];
                              return a < b;
                          });
        sel[g].assign(idx.begin(), idx.begin() + take);
        std::sort(sel[g].begin(), sel[g].end());
    }
    return sel;
}

}  // namespace

double dual_objective(std::span<const double> beta, const TripletSet& ts,
                      const GramOracle& oracle) {
    if (beta.size() != ts.size())
        throw InvalidArgumentError("beta length does not match triplet count");
    double linear = 0.0;
    for (double b : beta) linear += b;
    return linear - 0.5 * oracle.quadratic_form(ts, beta);
}

DualSolution solve_dual(const TripletSet& ts, const GramOracle& oracle, const SolverConfig& cfg) {
    validate_config(cfg);
    DualSolution solution;
    solution.c = cfg.c;
    if (ts.empty()) {
        solution.converged = true;
        solution.objective_history.push_back(0.0);
        return solution;
    }

    std::vector<double> beta(ts.size(), 0.0);

    if (!cfg.working_set) {
        const AscentResult res = ascend(ts, oracle, cfg, beta, solution.objective_history,
                                        cfg.max_iterations);
        solution.iterations = res.iterations;
        solution.converged = res.converged;
        solution.max_kkt_violation = res.kkt;
    } else {
        const std::size_t cap = cfg.working_set->cap_per_pair;
        Selection selection = initial_selection(ts, cap);
        std::vector<std::size_t> sub_to_full;
        std::vector<double> grad_full(ts.size()), tmp, scratch;
        std::size_t total_iterations = 0;
        while (true) {
            TripletSet sub = build_subset(ts, selection, sub_to_full);
            std::vector<double> beta_sub(sub.size());
            for (std::size_t s = 0; s < sub.size(); ++s) beta_sub[s] = beta[sub_to_full[s]];

            const std::size_t budget = std::min(cfg.working_set->refresh_every,
                                                cfg.max_iterations - total_iterations);
            const AscentResult inner =
                ascend(sub, oracle, cfg, beta_sub, solution.objective_history, budget);
            total_iterations += inner.iterations;

            std::fill(beta.begin(), beta.end(), 0.0);
            for (std::size_t s = 0; s < sub.size(); ++s) beta[sub_to_full[s]] = beta_sub[s];

            oracle.apply(ts, beta, grad_full);
            for (std::size_t t = 0; t < ts.size(); ++t) grad_full[t] = 1.0 - grad_full[t];
            solution.max_kkt_violation =
                kkt_residual(beta, grad_full, ts, cfg.c, tmp, scratch);

            Selection refreshed = select_most_violating(ts, grad_full, cap);
            const bool stable = refreshed == selection;
            if (inner.converged && stable && solution.max_kkt_violation < cfg.kkt_tol) {
                solution.converged = true;
                break;
            }
            if (total_iterations >= cfg.max_iterations) break;
            selection = std::move(refreshed);
        }
        solution.iterations = total_iterations;
    }

    for (double& b : beta) {
        if (b < kBetaTruncation) b = 0.0;  // sparse, reproducible multipliers
    }
    solution.dual_objective = dual_objective(beta, ts, oracle);
    solution.beta = std::move(beta);
    return solution;
}

SimilarityModel recover_weights(std::span<const double> beta, const TripletSet& ts,
                                const RetrievalDataset& ds) {
    if (beta.size() != ts.size())
        throw InvalidArgumentError("beta length does not match triplet count");
    const std::size_t d = ds.dimension();
    SimilarityModel model = SimilarityModel::zero(d, Provenance::Trained);
    for (std::size_t t = 0; t < ts.size(); ++t) {
        const Triplet& trip = ts.triplets[t];
        const double b = beta[t];
        const FeatureVector& z = ds.queries[trip.query];
        const FeatureVector& xj = ds.database[trip.relevant];
        const FeatureVector& xk = ds.database[trip.irrelevant];
        for (std::size_t r = 0; r < d; ++r) {
            const double coef = b * z[r];
            double* row = model.weights.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) row[c] += coef * (xj[c] - xk[c]);
        }
    }
    return model;
}

CertificateReport certify(const DualSolution& solution, const TripletSet& ts,
                          const RetrievalDataset& ds, double kkt_tol) {
    if (!(kkt_tol > 0.0)) throw InvalidArgumentError("kkt_tol must be positive");
    if (!(solution.c > 0.0)) throw InvalidArgumentError("C must be positive");
    const double c = solution.c;
    const SimilarityModel model = recover_weights(solution.beta, ts, ds);

    double frob = 0.0;
    for (double w : model.weights) frob += w * w;
    double linear = 0.0;
    for (double b : solution.beta) linear += b;

    CertificateReport report;
    report.dual_objective = linear - 0.5 * frob;

    const double beta_positive_tol = kkt_tol * std::max(1.0, c);
    double slack_sum = 0.0;
    for (const TripletGroup& group : ts.groups) {
        const double xi = hinge_loss(ds, model, group.query, group.relevant);
        slack_sum += xi;

        double group_sum = 0.0;
        for (std::size_t t = group.begin; t < group.end; ++t) group_sum += solution.beta[t];
        report.max_feasibility_violation =
            std::max(report.max_feasibility_violation, group_sum - c);

        // alpha_ij = C - sum_k beta > 0 forces the slack to vanish.
        if (group_sum < c - kkt_tol) {
            report.max_complementarity_residual =
                std::max(report.max_complementarity_residual, std::abs(xi));
        }
        // beta > 0 forces its margin constraint to be active: xi = z'W(x_k - x_j) + 1.
        const double score_relevant =
            score(ds.queries[group.query], ds.database[group.relevant], model);
        for (std::size_t t = group.begin; t < group.end; ++t) {
            report.max_feasibility_violation =
                std::max(report.max_feasibility_violation, -solution.beta[t]);
            if (solution.beta[t] > beta_positive_tol) {
                const double score_irrelevant =
                    score(ds.queries[group.query], ds.database[ts.triplets[t].irrelevant], model);
                const double margin_term = score_irrelevant - score_relevant + 1.0;
                report.max_complementarity_residual =
                    std::max(report.max_complementarity_residual, std::abs(xi - margin_term));
            }
        }
    }

    report.primal_objective = 0.5 * frob + c * slack_sum;
    report.duality_gap = report.primal_objective - report.dual_objective;
    report.relative_gap = report.duality_gap / std::max(1.0, std::abs(report.dual_objective));
    report.certified = report.relative_gap < 1e-4 &&
                       report.max_complementarity_residual < kkt_tol &&
                       report.max_feasibility_violation < kkt_tol;
    return report;
}

}  // namespace topsim
