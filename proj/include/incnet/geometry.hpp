#pragma once

#include <map>
#include <string>
#include <vector>

#include "incnet/tensors.hpp"

namespace incnet::geometry {

// Faces grouped by size, closed under subfaces.
class SimplicialComplex {
public:
    SimplicialComplex(int n_nodes, std::vector<Face> faces);

    int n_nodes() const { return n_nodes_; }
    bool is_directed() const { return directed_; }
    // Sizes present, ascending, with counts.
    std::vector<std::pair<int, std::int64_t>> size_counts() const;
    const std::vector<Face>& faces(int size) const;
    bool contains(const Face& f) const;
    int max_size() const;

private:
    int n_nodes_;
    bool directed_;
    std::map<int, std::vector<Face>> by_size_;
    static const std::vector<Face> empty_;
};

// Closure of a facet list: all nonempty subsets for undirected facets, all
// nonempty subsequences for directed ones. Facets must share directedness.
SimplicialComplex closure(const std::vector<Face>& facets, int n_nodes);

struct IncidenceResult {
    IncidenceTensor tensor;   // densified over all faces of each size; values = mask
    std::vector<double> mask; // entry grid, {0,1}
};

// Incidence between present faces of sizes rows_size <= cols_size, densified
// over all undirected faces of those sizes. Different sizes: subset
// incidence. Equal sizes: a shared subface of size shared_size (default
// rows_size - 1) is required; by that rule a face is incident to itself.
IncidenceResult incidence_from_complex(const SimplicialComplex& c, int rows_size, int cols_size,
                                       int shared_size = -1);

struct PosetElement {
    int id = 0;
    std::vector<NodeId> nodes; // node-set label, stored sorted
    int rank = 0;
};

// Elements with ranks plus covering relations; the order is the transitive
// closure of the covers.
class GradedPoset {
public:
    GradedPoset(std::vector<PosetElement> elements, std::vector<std::pair<int, int>> covers);

    const std::vector<PosetElement>& elements() const { return elements_; }
    const std::vector<std::pair<int, int>>& covers() const { return covers_; }
    std::vector<int> ranks() const; // distinct ranks, ascending
    std::vector<const PosetElement*> at_rank(int rank) const;
    bool less(int id_a, int id_b) const;
    bool has_element(int id) const;
    const PosetElement& element(int id) const;

private:
    std::vector<PosetElement> elements_;
    std::vector<std::pair<int, int>> covers_;
    std::map<int, int> index_;                 // id -> position
    std::vector<std::vector<bool>> reachable_; // strict order
};

struct PosetViolation {
    std::string kind; // "cycle", "rank-monotonicity", "covering-rank", "duplicate-id", ...
    std::string detail;
};

struct PosetValidation {
    bool valid = false;
    std::vector<PosetViolation> violations;
};

// Checks the graded-poset axioms: the order is irreflexive (covers are
// acyclic), rank strictly increases along the order, and true covering pairs
// differ in rank by exactly one.
PosetValidation validate_poset(const GradedPoset& p);

// Densified incidence between two ranks: mask 1 where the order relates the
// two elements (either direction). Every element of each rank must carry the
// same node-set size.
IncidenceResult incidence_from_poset(const GradedPoset& p, int rank_a, int rank_b);

} // namespace incnet::geometry
