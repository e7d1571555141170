#pragma once

#include <string>

#include "core/types.hpp"

namespace topsim {

/// Model file format (JSON, format_version 1):
///   { "format_version": 1, "d": <int>, "W": [d*d numbers, row-major],
///     "provenance": "trained"|"identity"|"external",
///     "trained_C": <number or null>, "preprocessing": {"normalize": <bool>} }
/// Numbers round-trip exactly; unknown fields are rejected.
void save_model(const SimilarityModel& model, const std::string& path);

SimilarityModel load_model(const std::string& path);

}  // namespace topsim
