#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace topsim {

enum class SynthKind {
    /// Per-query block structure on orthogonal directions: at noise 0 the
    /// plain inner product strictly separates relevant from irrelevant items.
    /// Requires ceil(m / relevant_per_query) + 1 directions to fit into d.
    Separable,
    /// Relevance comes from a hidden well-conditioned rotation W* applied in
    /// z' W* x, so identity similarity is suboptimal while a bilinear learner
    /// can recover the ranking. Requires d >= 2.
    RotatedCorrelation,
};

struct SynthParams {
    SynthKind kind = SynthKind::Separable;
    std::size_t n = 10;
    std::size_t m = 48;
    std::size_t d = 16;
    std::size_t relevant_per_query = 4;
    double noise = 0.35;
    std::uint64_t seed = 0;
};

struct SynthResult {
    RetrievalDataset dataset;
    std::vector<double> hidden_weights;  // d*d row-major for RotatedCorrelation, empty otherwise
};

/// Deterministic synthetic dataset generation; identical parameters and seed
/// always produce an identical dataset.
SynthResult generate_synthetic(const SynthParams& params);

}  // namespace topsim
