#pragma once

#include <string>

#include "trainer/trainer.hpp"

namespace topsim {

/// JSON document describing a training run: solver statistics plus the
/// optimality certificate. Key order and number formatting are deterministic.
std::string train_report_json(const TrainOutcome& outcome, const SolverConfig& cfg,
                              bool normalize);

/// JSON document with the mean top precision, the per-query breakdown and the
/// skipped queries of one evaluation.
std::string evaluation_report_json(const EvaluationReport& report);

}  // namespace topsim
