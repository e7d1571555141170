#include "core/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace topsim {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Trained: return "trained";
        case Provenance::Identity: return "identity";
        case Provenance::External: return "external";
    }
    return "external";
}

std::optional<Provenance> provenance_from_string(const std::string& s) {
    if (s == "trained") return Provenance::Trained;
    if (s == "identity") return Provenance::Identity;
    if (s == "external") return Provenance::External;
    return std::nullopt;
}

SimilarityModel SimilarityModel::zero(std::size_t d, Provenance p) {
    SimilarityModel m;
    m.dim = d;
    m.weights.assign(d * d, 0.0);
    m.provenance = p;
    return m;
}

SimilarityModel SimilarityModel::identity(std::size_t d) {
    SimilarityModel m = zero(d, Provenance::Identity);
    for (std::size_t r = 0; r < d; ++r) m.weights[r * d + r] = 1.0;
    return m;
}

namespace {

bool all_finite(const FeatureVector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

ValidationReport validate_dataset(const RetrievalDataset& ds) {
    ValidationReport report;
    auto add = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (ds.queries.empty()) add("dataset has no queries");
    if (ds.database.empty()) add("dataset has no database vectors");
    if (!report.ok()) return report;

    const std::size_t d = ds.queries.front().size();
    if (d == 0) add("empty feature vector at query 0");

    for (std::size_t i = 0; i < ds.queries.size(); ++i) {
        if (ds.queries[i].size() != d) {
            std::ostringstream os;
            os << "dimension mismatch at query " << i;
            add(os.str());
        } else if (!all_finite(ds.queries[i])) {
            std::ostringstream os;
            os << "non-finite value at query " << i;
            add(os.str());
        }
    }
    for (std::size_t j = 0; j < ds.database.size(); ++j) {
        if (ds.database[j].size() != d) {
            std::ostringstream os;
            os << "dimension mismatch at database " << j;
            add(os.str());
        } else if (!all_finite(ds.database[j])) {
            std::ostringstream os;
            os << "non-finite value at database " << j;
            add(os.str());
        }
    }

    const std::size_t n = ds.queries.size();
    const std::size_t m = ds.database.size();
    if (ds.relevance.size() != n * m) {
        std::ostringstream os;
        os << "relevance has " << ds.relevance.size() << " entries, expected " << n << "x" << m;
        add(os.str());
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::uint8_t y = ds.relevance[i * m + j];
            if (y != 0 && y != 1) {
                std::ostringstream os;
                os << "non-binary relevance at (" << i << "," << j << ")";
                add(os.str());
            }
        }
    }
    return report;
}

void require_valid(const RetrievalDataset& ds) {
    const ValidationReport report = validate_dataset(ds);
    if (report.ok()) return;
    std::ostringstream os;
    os << "invalid dataset:";
    for (const std::string& v : report.violations) os << " " << v << ";";
    throw InvalidArgumentError(os.str());
}

namespace {

TripletSet enumerate_impl(const RetrievalDataset& ds, std::size_t cap_per_pair,
                          const std::vector<std::size_t>& queries) {
    const std::size_t m = ds.num_database();
    TripletSet ts;
    std::vector<std::size_t> irrelevant;
    for (std::size_t i : queries) {
        irrelevant.clear();
        for (std::size_t k = 0; k < m; ++k) {
            if (!ds.relevant(i, k)) irrelevant.push_back(k);
        }
        if (irrelevant.empty()) continue;
        const std::size_t take =
            cap_per_pair == 0 ? irrelevant.size() : std::min(cap_per_pair, irrelevant.size());
        for (std::size_t j = 0; j < m; ++j) {
            if (!ds.relevant(i, j)) continue;
            TripletGroup group{i, j, ts.triplets.size(), 0};
            for (std::size_t t = 0; t < take; ++t) {
                ts.triplets.push_back(Triplet{i, j, irrelevant[t]});
            }
            group.end = ts.triplets.size();
            ts.groups.push_back(group);
        }
    }
    return ts;
}

}  // namespace

TripletSet enumerate_triplets(const RetrievalDataset& ds, std::size_t cap_per_pair) {
    require_valid(ds);
    std::vector<std::size_t> all(ds.num_queries());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return enumerate_impl(ds, cap_per_pair, all);
}

TripletSet enumerate_triplets(const RetrievalDataset& ds, std::size_t cap_per_pair,
                              std::span<const std::size_t> query_subset) {
    require_valid(ds);
    std::vector<std::size_t> queries(query_subset.begin(), query_subset.end());
    std::sort(queries.begin(), queries.end());
    for (std::size_t q = 0; q < queries.size(); ++q) {
        if (queries[q] >= ds.num_queries()) {
            std::ostringstream os;
            os << "query index " << queries[q] << " out of range (n=" << ds.num_queries() << ")";
            throw InvalidArgumentError(os.str());
        }
        if (q > 0 && queries[q] == queries[q - 1]) {
            std::ostringstream os;
            os << "duplicate query index " << queries[q];
            throw InvalidArgumentError(os.str());
        }
    }
    return enumerate_impl(ds, cap_per_pair, queries);
}

}  // namespace topsim
