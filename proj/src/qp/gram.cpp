#include "qp/gram.hpp"

#include <cmath>

#include "core/error.hpp"

namespace topsim {

namespace {

double mix(std::size_t x) {
    // splitmix64 finalizer
    std::uint64_t z = static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<double>(z ^ (z >> 31));
}

}  // namespace

std::size_t GramOracle::KeyHash::operator()(const Key& key) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t part : {key.j, key.k, key.j2, key.k2}) {
        h ^= static_cast<std::uint64_t>(part) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

GramOracle::GramOracle(const RetrievalDataset& ds) : ds_(&ds), n_(ds.num_queries()) {
    require_valid(ds);
    const std::size_t d = ds.dimension();
    query_gram_.assign(n_ * n_, 0.0);
    for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = a; b < n_; ++b) {
            double dot = 0.0;
            for (std::size_t c = 0; c < d; ++c) dot += ds.queries[a][c] * ds.queries[b][c];
            if (!std::isfinite(dot)) throw NumericError("numerical overflow in Gram");
            query_gram_[a * n_ + b] = dot;
            query_gram_[b * n_ + a] = dot;
        }
    }
}

double GramOracle::difference_dot_uncached(std::size_t j, std::size_t k, std::size_t j2,
                                           std::size_t k2) const {
    const std::size_t d = ds_->dimension();
    const FeatureVector& xj = ds_->database[j];
    const FeatureVector& xk = ds_->database[k];
    const FeatureVector& xj2 = ds_->database[j2];
    const FeatureVector& xk2 = ds_->database[k2];
    double dot = 0.0;
    for (std::size_t c = 0; c < d; ++c) dot += (xj[c] - xk[c]) * (xj2[c] - xk2[c]);
    return dot;
}

double GramOracle::difference_dot(std::size_t j, std::size_t k, std::size_t j2,
                                  std::size_t k2) const {
    // Canonical key: the product is symmetric under swapping the two pairs.
    Key key{j, k, j2, k2};
    if (std::pair(j2, k2) < std::pair(j, k)) key = Key{j2, k2, j, k};

    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto found = cache_index_.find(key);
        if (found != cache_index_.end()) {
            cache_order_.splice(cache_order_.begin(), cache_order_, found->second);
            return found->second->second;
        }
    }
    const double value = difference_dot_uncached(key.j, key.k, key.j2, key.k2);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        if (cache_index_.find(key) == cache_index_.end()) {
            if (cache_order_.size() >= kCacheCapacity) {
                cache_index_.erase(cache_order_.back().first);
                cache_order_.pop_back();
            }
            cache_order_.emplace_front(key, value);
            cache_index_[key] = cache_order_.begin();
        }
    }
    return value;
}

double GramOracle::entry(const Triplet& a, const Triplet& b) const {
    const double value = query_gram(a.query, b.query) *
                         difference_dot(a.relevant, a.irrelevant, b.relevant, b.irrelevant);
    if (!std::isfinite(value)) throw NumericError("numerical overflow in Gram");
    return value;
}

void GramOracle::accumulate_weights(const TripletSet& ts, std::span<const double> beta,
                                    std::span<double> w) const {
    const std::size_t d = ds_->dimension();
    std::vector<double> v(d);
    std::size_t g = 0;
    while (g < ts.groups.size()) {
        const std::size_t qi = ts.groups[g].query;
        std::fill(v.begin(), v.end(), 0.0);
        while (g < ts.groups.size() && ts.groups[g].query == qi) {
            const TripletGroup& group = ts.groups[g];
            const FeatureVector& xj = ds_->database[group.relevant];
            for (std::size_t t = group.begin; t < group.end; ++t) {
                const double b = beta[t];
                const FeatureVector& xk = ds_->database[ts.triplets[t].irrelevant];
                for (std::size_t c = 0; c < d; ++c) v[c] += b * (xj[c] - xk[c]);
            }
            ++g;
        }
        const FeatureVector& z = ds_->queries[qi];
        for (std::size_t r = 0; r < d; ++r) {
            const double zr = z[r];
            double* row = w.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) row[c] += zr * v[c];
        }
    }
}

void GramOracle::apply(const TripletSet& ts, std::span<const double> beta,
                       std::span<double> out) const {
    const std::size_t d = ds_->dimension();
    const std::size_t m = ds_->num_database();
    std::vector<double> w(d * d, 0.0);
    accumulate_weights(ts, beta, w);

    // u_i = W' z_i, then s[i][j] = u_i . x_j and (G beta)_t = s[i][j] - s[i][k].
    std::vector<double> u(n_ * d, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const FeatureVector& z = ds_->queries[i];
        double* ui = u.data() + i * d;
        for (std::size_t r = 0; r < d; ++r) {
            const double zr = z[r];
            const double* row = w.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) ui[c] += zr * row[c];
        }
    }
    std::vector<double> s(n_ * m, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* ui = u.data() + i * d;
        for (std::size_t j = 0; j < m; ++j) {
            const FeatureVector& x = ds_->database[j];
            double dot = 0.0;
            for (std::size_t c = 0; c < d; ++c) dot += ui[c] * x[c];
            s[i * m + j] = dot;
        }
    }
    for (std::size_t t = 0; t < ts.size(); ++t) {
        const Triplet& trip = ts.triplets[t];
        out[t] = s[trip.query * m + trip.relevant] - s[trip.query * m + trip.irrelevant];
        if (!std::isfinite(out[t])) throw NumericError("numerical overflow in Gram");
    }
}

double GramOracle::quadratic_form(const TripletSet& ts, std::span<const double> beta) const {
    const std::size_t d = ds_->dimension();
    std::vector<double> w(d * d, 0.0);
    accumulate_weights(ts, beta, w);
    double frob = 0.0;
    for (double x : w) frob += x * x;
    if (!std::isfinite(frob)) throw NumericError("numerical overflow in Gram");
    return frob;
}

double GramOracle::lipschitz_estimate(const TripletSet& ts, std::size_t power_steps) const {
    const std::size_t t_count = ts.size();
    if (t_count == 0) return 0.0;
    std::vector<double> v(t_count);
    for (std::size_t t = 0; t < t_count; ++t) v[t] = 1.0 + mix(t) * 0x1.0p-64;  // deterministic start
    std::vector<double> gv(t_count);
    double lambda = 0.0;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    for (std::size_t step = 0; step < power_steps; ++step) {
        apply(ts, v, gv);
        lambda = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) lambda += v[t] * gv[t];
        norm = 0.0;
        for (double x : gv) norm += x * x;
        norm = std::sqrt(norm);
        if (norm <= 0.0) return 0.0;  // G v vanished: operator is (numerically) zero on this cone
        for (std::size_t t = 0; t < t_count; ++t) v[t] = gv[t] / norm;
    }
    return 1.01 * std::max(lambda, 0.0);
}

}  // namespace topsim
