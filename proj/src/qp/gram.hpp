#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace topsim {

/// Factored access to the dual Gram matrix
///   G(t, t') = (z_i . z_i') * ((x_j' - x_k') . (x_j - x_k)).
/// The n-by-n query Gram is precomputed; difference dot products are computed
/// on demand behind a bounded LRU cache. The full T-by-T matrix is never
/// materialized: operator products go through the d-by-d accumulation
/// W(beta) = sum_t beta_t z_i (x_j - x_k)', for which
///   (G beta)_t = z_i' W(beta) (x_j - x_k)  and  beta' G beta = ||W(beta)||_F^2.
class GramOracle {
public:
    explicit GramOracle(const RetrievalDataset& ds);

    const RetrievalDataset& dataset() const { return *ds_; }
    std::size_t num_queries() const { return n_; }

    double query_gram(std::size_t a, std::size_t b) const { return query_gram_[a * n_ + b]; }

    /// (x_j - x_k) . (x_j2 - x_k2), LRU-cached; safe to call from many threads.
    double difference_dot(std::size_t j, std::size_t k, std::size_t j2, std::size_t k2) const;

    /// One Gram coefficient; symmetric in (a, b).
    double entry(const Triplet& a, const Triplet& b) const;

    /// out = G beta (out.size() == ts.size()).
    void apply(const TripletSet& ts, std::span<const double> beta, std::span<double> out) const;

    /// beta' G beta, evaluated as the squared Frobenius norm of W(beta).
    double quadratic_form(const TripletSet& ts, std::span<const double> beta) const;

    /// Accumulates W(beta) into w (row-major d*d, zeroed first), grouped by query.
    void accumulate_weights(const TripletSet& ts, std::span<const double> beta,
                            std::span<double> w) const;

    /// Largest-eigenvalue estimate of G restricted to ts, by power iteration,
    /// scaled by a 1.01 safety factor.
    double lipschitz_estimate(const TripletSet& ts, std::size_t power_steps = 50) const;

private:
    struct Key {
        std::size_t j, k, j2, k2;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const;
    };

    double difference_dot_uncached(std::size_t j, std::size_t k, std::size_t j2,
                                   std::size_t k2) const;

    const RetrievalDataset* ds_;
    std::size_t n_;
    std::vector<double> query_gram_;

    static constexpr std::size_t kCacheCapacity = 100000;
    mutable std::mutex cache_mutex_;
    mutable std::list<std::pair<Key, double>> cache_order_;  // front = most recent
    mutable std::unordered_map<Key, std::list<std::pair<Key, double>>::iterator, KeyHash>
        cache_index_;
};

}  // namespace topsim
