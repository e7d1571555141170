#include "report/report.hpp"

#include <json.hpp>

namespace topsim {

using nlohmann::json;

std::string train_report_json(const TrainOutcome& outcome, const SolverConfig& cfg,
                              bool normalize) {
    json j;
    j["c"] = cfg.c;
    j["normalize"] = normalize;
    j["triplets"] = outcome.triplet_count;
    j["groups"] = outcome.group_count;
    j["iterations"] = outcome.solution.iterations;
    j["converged"] = outcome.solution.converged;
    j["dual_objective"] = outcome.solution.dual_objective;
    j["max_kkt_violation"] = outcome.solution.max_kkt_violation;
    j["primal_objective"] = outcome.certificate.primal_objective;
    j["duality_gap"] = outcome.certificate.duality_gap;
    j["relative_duality_gap"] = outcome.certificate.relative_gap;
    j["max_complementarity_residual"] = outcome.certificate.max_complementarity_residual;
    j["certified"] = outcome.certificate.certified;
    j["no_triplets_warning"] = outcome.no_triplets;
    return j.dump(2);
}

std::string evaluation_report_json(const EvaluationReport& report) {
    json j;
    j["mean_top_precision"] = report.mean_top_precision;
    j["evaluated_queries"] = report.per_query.size();
    j["skipped_queries"] = report.skipped;
    json per_query = json::array();
    for (const QueryTopPrecision& q : report.per_query) {
        per_query.push_back(json{{"query", q.query}, {"top_precision", q.value}});
    }
    j["per_query"] = per_query;
    j["model_provenance"] = to_string(report.provenance);
    j["model_dim"] = report.dim;
    return j.dump(2);
}

}  // namespace topsim
