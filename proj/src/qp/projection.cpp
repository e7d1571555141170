#include "qp/projection.hpp"

#include <algorithm>
#include <functional>

#include "core/error.hpp"

namespace topsim {

void project_capped_simplex_inplace(std::span<double> v, double c, std::vector<double>& scratch) {
    if (!(c > 0.0)) throw InvalidArgumentError("C must be positive");
    if (v.empty()) return;

    double clipped_sum = 0.0;
    for (double x : v) clipped_sum += std::max(x, 0.0);
    if (clipped_sum <= c) {
        for (double& x : v) x = std::max(x, 0.0);
        return;
    }

    // Sum exceeds the cap: project onto {u >= 0, sum(u) = c}.
    scratch.assign(v.begin(), v.end());
    std::sort(scratch.begin(), scratch.end(), std::greater<double>());
    double prefix = 0.0;
    double tau = 0.0;
    for (std::size_t r = 0; r < scratch.size(); ++r) {
        prefix += scratch[r];
        const double candidate = (prefix - c) / static_cast<double>(r + 1);
        if (scratch[r] - candidate > 0.0) tau = candidate;
    }
    for (double& x : v) {
        x = std::max(x - tau, 0.0);
        if (x > -1e-15 && x < 0.0) x = 0.0;
    }
}

std::vector<double> project_capped_simplex(std::span<const double> v, double c) {
    std::vector<double> out(v.begin(), v.end());
    std::vector<double> scratch;
    project_capped_simplex_inplace(out, c, scratch);
    return out;
}

}  // namespace topsim
