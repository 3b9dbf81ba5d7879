#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "incnet/equimap.hpp"

namespace incnet::oracle {

// The equality pattern of an (output face, input face) pair: which input
// positions hold the same node as which output positions. Since nodes within
// a face are distinct, the pattern is a partial injective matching.
struct OrbitPattern {
    int input_size = 0;
    int output_size = 0;
    std::vector<std::pair<int, int>> matches; // (input pos, output pos), 1-based, ascending

    friend bool operator==(const OrbitPattern&, const OrbitPattern&) = default;
    friend auto operator<=>(const OrbitPattern&, const OrbitPattern&) = default;
};

OrbitPattern pair_pattern(std::span<const NodeId> out_face, std::span<const NodeId> in_face);

struct Orbit {
    OrbitPattern pattern;
    // (output face index, input face index) members in canonical face order.
    std::vector<std::pair<std::int64_t, std::int64_t>> members;
};

// Groups all (output face, input face) pairs by equality pattern under node
// identity and verifies the grouping is closed under the diagonal action
// (every permutation for n_nodes <= 5, `samples` seeded ones above). Orbits
// are returned in the order of enumerate_terms via the term/orbit bijection;
// patterns unrealizable at small n_nodes are absent. With require_resolved,
// n_nodes < input_size + output_size is rejected since some orbits are then
// guaranteed to be missing.
std::vector<Orbit> enumerate_orbits_bruteforce(int input_size, int output_size, int n_nodes,
                                               bool require_resolved = true,
                                               int samples = 120, std::uint64_t seed = 0);

// The term whose pooled set is the unmatched input positions and whose
// placement lists, per matched input position in ascending order, the matched
// output position.
PoolBroadcastTerm orbit_to_term(const OrbitPattern& pattern);
OrbitPattern term_pattern(const PoolBroadcastTerm& term);

struct DenseMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::int64_t> data; // row-major

    std::int64_t& at(std::int64_t r, std::int64_t c) { return data[r * cols + c]; }
    std::int64_t at(std::int64_t r, std::int64_t c) const { return data[r * cols + c]; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

// Entry (out_face, in_face) is 1 iff in_face agrees with out_face on every
// matched pair of the term; this is exactly the matrix of apply_term with sum
// aggregation, and equals the sum of the orbit indicators over all patterns
// refining the term's matching.
DenseMatrix term_to_denseW(const PoolBroadcastTerm& term, int n_nodes);

DenseMatrix orbit_indicator(const OrbitPattern& pattern, int n_nodes);

// Ground truth for apply_map: the matrix-vector product of
// sum_o weights[o] * indicator(orbit_o) with the flattened face-vector,
// channelwise. weights follows the orbit order of enumerate_orbits_bruteforce.
FaceVector oracle_apply(std::span<const double> weights, const std::vector<Orbit>& orbits,
                        const FaceVector& x);

// Basis change from pool/broadcast term weights to orbit-indicator weights:
// the weight of an orbit is the sum of the weights of the terms whose
// matching its pattern refines. Row order follows the given containers.
std::vector<double> orbit_weights_from_term_weights(std::span<const double> term_weights,
                                                    const std::vector<PoolBroadcastTerm>& terms,
                                                    const std::vector<Orbit>& orbits);

std::int64_t bell(int n);            // 0 <= n <= 12
std::int64_t stirling(int n, int k); // second kind, 0 <= n <= 12

struct OrbitCountCase {
    int input_size = 0;
    int output_size = 0;
    int n_nodes = 0;
    std::int64_t orbit_count = 0;
    std::int64_t tau = 0;
    bool match = false;
    bool expected_undercount = false; // n_nodes < input_size + output_size
};

OrbitCountCase check_orbit_count(int input_size, int output_size, int n_nodes);

struct EquivalenceCase {
    int input_size = 0;
    int output_size = 0;
    int n_nodes = 0;
    int cases = 0;
    double max_abs_diff = 0.0;
    bool match = false;
};

// Seeded random integer weights and inputs; compares apply_map against
// oracle_apply (through the term-to-orbit basis change) and against the
// summed dense term matrices. Exact agreement expected.
EquivalenceCase check_map_equivalence(int input_size, int output_size, int n_nodes, int cases,
                                      std::uint64_t seed);

} // namespace incnet::oracle
