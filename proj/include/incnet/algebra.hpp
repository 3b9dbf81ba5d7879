#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "incnet/faces.hpp"

namespace incnet::algebra {

// One pool/broadcast operator on the undirected-graph feature space
// (node features followed by edge features): pools the first
// in_size - matched positions of the input face-vector and broadcasts the
// survivors over every matched-size subset of the output positions.
struct LOperator {
    int in_size = 1;  // 1 = nodes, 2 = edges
    int out_size = 1;
    int matched = 0;  // 0 <= matched <= min(in_size, out_size)

    friend bool operator==(const LOperator&, const LOperator&) = default;
};

// The nine legal operators, ordered by (in_size, out_size, matched).
std::vector<LOperator> legal_operators();

// Feature-space dimension: n_nodes + C(n_nodes, 2), nodes first, then edges
// in lexicographic order.
int feature_dim(int n_nodes);

struct OperatorMatrix {
    int n_nodes = 0;
    Eigen::MatrixXd mat; // feature_dim x feature_dim, single nonzero block
};

// Requires n_nodes >= 3 so that node, edge and off-diagonal structure exist.
OperatorMatrix build_L(const LOperator& op, int n_nodes);

// Permutation of feature slots induced by a node relabeling; conjugation by
// it fixes every build_L matrix exactly.
Eigen::MatrixXd feature_permutation(const Permutation& p);

struct ComposeCheck {
    LOperator first;
    LOperator second;
    std::vector<int> predicted; // matched indices k of the predicted span
    Eigen::VectorXd coefficients;
    double residual = 0.0; // Frobenius norm of the least-squares remainder
};

// Checks that applying `first` then `second` lies in the span of
// L^{in->out}_k for k in [max(0, i+j-mid), min(i, j)], where mid is the
// shared middle size. Requires n_nodes >= 5.
ComposeCheck compose_check(const LOperator& first, const LOperator& second, int n_nodes);

// Rank of the vectorized operator matrices; singular values below
// tol * largest count as zero. Empty set has dimension 0.
int span_dimension(std::span<const LOperator> ops, int n_nodes, double tol = 1e-9);

struct TwoLayerSpanResult {
    int dim_full = 0;      // all nine operators
    int dim_single = 0;    // nine minus L^{2->2}_1
    int dim_two_layer = 0; // the reduced set plus all of its legal products
};

TwoLayerSpanResult two_layer_span_check(int n_nodes);

} // namespace incnet::algebra
