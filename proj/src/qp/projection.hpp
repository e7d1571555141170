#pragma once

#include <span>
#include <vector>

namespace topsim {

/// Euclidean projection of v onto the capped simplex {u : u >= 0, sum(u) <= c}.
/// Clips negatives first; when the clipped sum exceeds c, projects onto the
/// simplex {u >= 0, sum(u) = c} by sort-and-threshold.
std::vector<double> project_capped_simplex(std::span<const double> v, double c);

/// In-place variant; scratch is reused between calls to avoid reallocation.
void project_capped_simplex_inplace(std::span<double> v, double c, std::vector<double>& scratch);

}  // namespace topsim
