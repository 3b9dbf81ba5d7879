#pragma once

#include <stdexcept>
#include <string>

namespace incnet {

// Thrown when a size/shape/flag combination is not a meaningful request.
struct invalid_signature_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Node ids out of range, repeated ids within a face, malformed face data.
struct invalid_face_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A constraint set that no entry can satisfy (e.g. a group tying two
// positions of the same face) or that is structurally malformed.
struct infeasible_constraints_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Tensor data and its declared constraint/partition structure disagree.
struct inconsistent_decomposition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The node budget is too small for the brute-force orbit enumeration to
// resolve every orbit (n_nodes < in_size + out_size).
struct under_resolved_orbits_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Poset ranks whose elements do not share a uniform node-set size.
struct unsupported_irregular_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mean/max aggregation over an empty pooled set.
struct empty_pool_error : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace incnet
