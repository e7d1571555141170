#include "dataio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace topsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

void validate_params(const SynthParams& p) {
    if (p.n == 0 || p.m == 0 || p.d == 0 || p.relevant_per_query == 0) {
        throw InvalidArgumentError("n, m, d and relevant_per_query must be positive");
    }
    if (p.relevant_per_query >= p.m) {
        throw InvalidArgumentError("relevant_per_query must be smaller than m");
    }
    if (!(p.noise >= 0.0)) throw InvalidArgumentError("noise must be non-negative");
}

SynthResult generate_separable(const SynthParams& p) {
    const std::size_t full_blocks = p.m / p.relevant_per_query;
    const std::size_t extra = (p.m % p.relevant_per_query) ? 1 : 0;
    if (full_blocks + extra > p.d) {
        std::ostringstream os;
        os << "separable generation needs " << full_blocks + extra
           << " orthogonal directions (m / relevant_per_query plus a remainder block) "
           << "but d = " << p.d;
        throw InvalidArgumentError(os.str());
    }

    Rng rng(p.seed);
    SynthResult result;
    RetrievalDataset& ds = result.dataset;

    for (std::size_t i = 0; i < p.n; ++i) {
        const std::size_t block = i % full_blocks;
        FeatureVector z(p.d, 0.0);
        z[block] = 1.0 + 0.2 * rng.uniform01();
        ds.queries.push_back(std::move(z));
    }
    for (std::size_t j = 0; j < p.m; ++j) {
        std::size_t direction = j / p.relevant_per_query;
        if (direction >= full_blocks) direction = full_blocks;  // leftover distractor block
        FeatureVector x(p.d, 0.0);
        x[direction] = 1.0 + 0.2 * rng.uniform01();
        if (p.noise > 0.0) {
            for (std::size_t c = 0; c < p.d; ++c) x[c] += p.noise * rng.gauss();
        }
        ds.database.push_back(std::move(x));
    }
    ds.relevance.assign(p.n * p.m, 0);
    for (std::size_t i = 0; i < p.n; ++i) {
        const std::size_t block = i % full_blocks;
        for (std::size_t j = block * p.relevant_per_query;
             j < (block + 1) * p.relevant_per_query; ++j) {
            ds.relevance[i * p.m + j] = 1;
        }
    }
    return result;
}

SynthResult generate_rotated(const SynthParams& p) {
    if (p.d < 2) {
        throw InvalidArgumentError("rotated_correlation needs d >= 2 to rotate away from identity");
    }
    Rng rng(p.seed);
    SynthResult result;
    RetrievalDataset& ds = result.dataset;

    // Hidden scorer: a product of random Givens rotations, orthogonal and
    // well-conditioned by construction.
    std::vector<double>& w = result.hidden_weights;
    w.assign(p.d * p.d, 0.0);
    for (std::size_t r = 0; r < p.d; ++r) w[r * p.d + r] = 1.0;
    for (std::size_t rot = 0; rot < 3 * p.d; ++rot) {
        const std::size_t a = static_cast<std::size_t>(rng.bounded(p.d));
        std::size_t b = static_cast<std::size_t>(rng.bounded(p.d - 1));
        if (b >= a) ++b;
        const double theta = kTwoPi * rng.uniform01();
        const double cos_t = std::cos(theta);
        const double sin_t = std::sin(theta);
        for (std::size_t c = 0; c < p.d; ++c) {
            const double wa = w[a * p.d + c];
            const double wb = w[b * p.d + c];
            w[a * p.d + c] = cos_t * wa - sin_t * wb;
            w[b * p.d + c] = sin_t * wa + cos_t * wb;
        }
    }

    for (std::size_t i = 0; i < p.n; ++i) {
        FeatureVector z(p.d);
        for (std::size_t c = 0; c < p.d; ++c) z[c] = rng.gauss();
        ds.queries.push_back(std::move(z));
    }
    for (std::size_t j = 0; j < p.m; ++j) {
        FeatureVector x(p.d);
        for (std::size_t c = 0; c < p.d; ++c) x[c] = rng.gauss();
        if (p.noise > 0.0) {
            for (std::size_t c = 0; c < p.d; ++c) x[c] += p.noise * rng.gauss();
        }
        ds.database.push_back(std::move(x));
    }

    // Relevance: the top relevant_per_query items per query under the hidden
    // scorer, ties broken toward the lower index.
    ds.relevance.assign(p.n * p.m, 0);
    std::vector<double> scores(p.m);
    std::vector<std::size_t> order(p.m);
    for (std::size_t i = 0; i < p.n; ++i) {
        const FeatureVector& z = ds.queries[i];
        for (std::size_t j = 0; j < p.m; ++j) {
            const FeatureVector& x = ds.database[j];
            double acc = 0.0;
            for (std::size_t r = 0; r < p.d; ++r) {
                double row = 0.0;
                for (std::size_t c = 0; c < p.d; ++c) row += w[r * p.d + c] * x[c];
                acc += z[r] * row;
            }
            scores[j] = acc;
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        for (std::size_t r = 0; r < p.relevant_per_query; ++r) {
            ds.relevance[i * p.m + order[r]] = 1;
        }
    }
    return result;
}

}  // namespace

SynthResult generate_synthetic(const SynthParams& params) {
    validate_params(params);
    SynthResult result = params.kind == SynthKind::Separable ? generate_separable(params)
                                                             : generate_rotated(params);
    require_valid(result.dataset);
    return result;
}

}  // namespace topsim
