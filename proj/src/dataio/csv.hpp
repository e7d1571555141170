#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace topsim {

/// Headerless CSV of decimal floating-point fields, one vector per row.
/// LF and CRLF line endings are both accepted.
std::vector<FeatureVector> load_features_csv(const std::string& path);

/// Writes one vector per row with round-trip-exact decimal formatting.
void save_features_csv(const std::vector<FeatureVector>& rows, const std::string& path);

struct RelevanceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> values;  // row-major
};

/// Headerless CSV of 0/1 integer fields.
RelevanceMatrix load_relevance_csv(const std::string& path);

void save_relevance_csv(const RelevanceMatrix& matrix, const std::string& path);

/// Loads and validates a full dataset from the three CSV files.
RetrievalDataset load_dataset(const std::string& queries_path, const std::string& database_path,
                              const std::string& relevance_path);

/// Writes the three CSV files for a dataset.
void save_dataset(const RetrievalDataset& ds, const std::string& queries_path,
                  const std::string& database_path, const std::string& relevance_path);

}  // namespace topsim
