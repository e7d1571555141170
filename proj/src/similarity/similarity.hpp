#pragma once

#include "core/types.hpp"

namespace topsim {

/// Bilinear score s(z, x) = z' W x, accumulated row-major over W so results
/// are reproducible bit for bit.
double score(const FeatureVector& z, const FeatureVector& x, const SimilarityModel& model);

/// Scores one query against every database vector; element j equals
/// score(z, database[j], model).
std::vector<double> score_all(const FeatureVector& z, const RetrievalDataset& ds,
                              const SimilarityModel& model);

/// Ranks the database by descending score; equal scores keep ascending
/// database index order.
RankingResult rank_database(const FeatureVector& z, const RetrievalDataset& ds,
                            const SimilarityModel& model);

}  // namespace topsim
