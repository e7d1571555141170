#pragma once

#include <optional>
#include <span>

#include "core/types.hpp"
#include "qp/gram.hpp"

namespace topsim {

/// Working-set restriction: keep only the cap_per_pair most violating
/// irrelevant items per (query, relevant) pair and rebuild that set every
/// refresh_every inner iterations, warm-starting the kept multipliers.
struct WorkingSetConfig {
    std::size_t cap_per_pair = 0;
    std::size_t refresh_every = 200;
};

struct SolverConfig {
    enum class StepRule { FixedInverseL, Backtracking };

    double c = 1.0;
    std::size_t max_iterations = 10000;
    double rel_tol = 1e-8;   // relative dual-objective change
    double kkt_tol = 1e-6;   // projected-gradient fixed-point residual
    StepRule step_rule = StepRule::FixedInverseL;
    std::optional<WorkingSetConfig> working_set;
};

/// Dual objective sum(beta) - 0.5 * beta' G beta.
double dual_objective(std::span<const double> beta, const TripletSet& ts,
                      const GramOracle& oracle);

/// Maximizes the dual by projected-gradient ascent with exact group-wise
/// capped-simplex projections. The returned multipliers are feasible; the
/// objective sequence is non-decreasing; convergence requires both the
/// relative objective change and the KKT residual to drop below tolerance.
DualSolution solve_dual(const TripletSet& ts, const GramOracle& oracle, const SolverConfig& cfg);

/// W = sum_t beta_t z_i (x_j - x_k)', accumulated rank-one in triplet order.
SimilarityModel recover_weights(std::span<const double> beta, const TripletSet& ts,
                                const RetrievalDataset& ds);

struct CertificateReport {
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;   // primal - dual; >= 0 up to rounding by weak duality
    double relative_gap = 0.0;  // gap / max(1, |dual|)
    double max_complementarity_residual = 0.0;
    double max_feasibility_violation = 0.0;
    bool certified = false;
};

/// Optimality certificate: duality gap of the recovered W against the dual
/// value, per-group complementary-slackness residuals, and dual feasibility.
/// The primal side is restricted to the pairs present in ts (pairs without
/// irrelevant items contribute zero loss either way).
CertificateReport certify(const DualSolution& solution, const TripletSet& ts,
                          const RetrievalDataset& ds, double kkt_tol = 1e-6);

}  // namespace topsim
