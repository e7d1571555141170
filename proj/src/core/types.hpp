#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace topsim {

/// One feature vector; all vectors of a dataset share the same length d.
using FeatureVector = std::vector<double>;

/// A retrieval problem instance: n query vectors, m database vectors and an
/// n-by-m binary relevance matrix (row-major, entry 1 means relevant).
struct RetrievalDataset {
    std::vector<FeatureVector> queries;
    std::vector<FeatureVector> database;
    std::vector<std::uint8_t> relevance;

    std::size_t num_queries() const { return queries.size(); }
    std::size_t num_database() const { return database.size(); }
    std::size_t dimension() const { return queries.empty() ? 0 : queries.front().size(); }
    bool relevant(std::size_t i, std::size_t j) const {
        return relevance[i * database.size() + j] != 0;
    }
};

enum class Provenance { Trained, Identity, External };

std::string to_string(Provenance p);
std::optional<Provenance> provenance_from_string(const std::string& s);

/// The learned scoring function s(z, x) = z' W x.
struct SimilarityModel {
    std::size_t dim = 0;
    std::vector<double> weights;  // row-major dim x dim
    Provenance provenance = Provenance::External;
    std::optional<double> trained_c;
    bool normalize = false;  // features were L2-normalized before training

    double weight(std::size_t r, std::size_t c) const { return weights[r * dim + c]; }

    static SimilarityModel zero(std::size_t d, Provenance p);
    static SimilarityModel identity(std::size_t d);
};

/// Index triple (query i, relevant item j, irrelevant item k).
struct Triplet {
    std::size_t query;
    std::size_t relevant;
    std::size_t irrelevant;

    bool operator==(const Triplet&) const = default;
};

/// Contiguous run of triplets sharing the pair (query, relevant).
struct TripletGroup {
    std::size_t query;
    std::size_t relevant;
    std::size_t begin;
    std::size_t end;  // exclusive

    std::size_t size() const { return end - begin; }
};

/// All triplets of a dataset in lexicographic (i, j, k) order, with the
/// contiguous per-pair grouping that defines the dual feasible set.
struct TripletSet {
    std::vector<Triplet> triplets;
    std::vector<TripletGroup> groups;

    std::size_t size() const { return triplets.size(); }
    bool empty() const { return triplets.empty(); }
};

/// Multipliers of the dual problem, aligned with a TripletSet.
struct DualSolution {
    std::vector<double> beta;
    double c = 0.0;
    double dual_objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double max_kkt_violation = 0.0;
    std::vector<double> objective_history;  // objective after each iteration, starting value included
};

/// Database indices sorted by descending score; ties go to the lower index.
struct RankingResult {
    std::vector<std::size_t> order;
    std::vector<double> scores;  // raw scores in database order
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every dataset invariant and reports each violation with indices.
ValidationReport validate_dataset(const RetrievalDataset& ds);

/// Throws InvalidArgumentError listing the violations when the dataset is invalid.
void require_valid(const RetrievalDataset& ds);

/// Enumerates all (i, j, k) with y_ij = 1 and y_ik = 0 in lexicographic order.
/// cap_per_pair = 0 keeps every k; otherwise at most cap_per_pair per (i, j),
/// taken in ascending k order.
TripletSet enumerate_triplets(const RetrievalDataset& ds, std::size_t cap_per_pair = 0);

/// Same, restricted to the given query indices (validated, deduplicated order-independent).
TripletSet enumerate_triplets(const RetrievalDataset& ds, std::size_t cap_per_pair,
                              std::span<const std::size_t> query_subset);

}  // namespace topsim
