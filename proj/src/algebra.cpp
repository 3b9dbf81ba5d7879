#include "incnet/algebra.hpp"

#include <algorithm>
#include <map>

#include "incnet/combinatorics.hpp"
#include "incnet/errors.hpp"

namespace incnet::algebra {

namespace {

// Feature slot of an undirected face (size 1 or 2): nodes first, then edges.
int slot_of(std::span<const NodeId> face, int n) {
    if (face.size() == 1) return face[0] - 1;
    return n + static_cast<int>(detail::tuple_to_index(face, n, false));
}

} // namespace

std::vector<LOperator> legal_operators() {
    std::vector<LOperator> ops;
    for (int in = 1; in <= 2; ++in)
        for (int out = 1; out <= 2; ++out)
            for (int k = 0; k <= std::min(in, out); ++k) ops.push_back({in, out, k});
    return ops;
}

int feature_dim(int n_nodes) { return n_nodes + static_cast<int>(binomial(n_nodes, 2)); }

OperatorMatrix build_L(const LOperator& op, int n_nodes) {
    if (n_nodes < 3) throw invalid_signature_error("operator matrices need at least 3 nodes");
    if (op.in_size < 1 || op.in_size > 2 || op.out_size < 1 || op.out_size > 2 ||
        op.matched < 0 || op.matched > std::min(op.in_size, op.out_size))
        throw invalid_signature_error("no such operator");
    const int q = feature_dim(n_nodes);
    OperatorMatrix result{n_nodes, Eigen::MatrixXd::Zero(q, q)};

    const auto in_faces = enumerate_faces(n_nodes, op.in_size, false);
    const auto out_faces = enumerate_faces(n_nodes, op.out_size, false);
    const int k = op.matched;

    for (const auto& f : in_faces) {
        const int col = slot_of(f.nodes(), n_nodes);
        // Sum the directed cover of f, pooled down to its size-k suffixes:
        // how many orderings of f's nodes end with a given k-tuple.
        std::map<std::vector<NodeId>, double> pooled;
        std::vector<NodeId> order(f.nodes().begin(), f.nodes().end());
        std::sort(order.begin(), order.end());
        do {
            std::vector<NodeId> key(order.end() - k, order.end());
            pooled[key] += 1.0;
        } while (std::next_permutation(order.begin(), order.end()));

        for (const auto& g : out_faces) {
            const int row = slot_of(g.nodes(), n_nodes);
            // Broadcast symmetrized over placements: sum the pooled table over
            // every ordered injective k-tuple of the output face's nodes, so
            // the result does not depend on an arbitrary placement choice.
            const auto gs = g.nodes();
            double val = 0.0;
            std::vector<NodeId> key(static_cast<std::size_t>(k));
            std::vector<bool> used(gs.size(), false);
            auto walk = [&](auto&& self, int depth) -> void {
                if (depth == k) {
                    if (auto it = pooled.find(key); it != pooled.end()) val += it->second;
                    return;
                }
                for (std::size_t i = 0; i < gs.size(); ++i) {
                    if (used[i]) continue;
                    used[i] = true;
                    key[static_cast<std::size_t>(depth)] = gs[i];
                    self(self, depth + 1);
                    used[i] = false;
                }
            };
            walk(walk, 0);
            if (val != 0.0) result.mat(row, col) = val;
        }
    }
    return result;
}

Eigen::MatrixXd feature_permutation(const Permutation& p) {
    const int n = p.size();
    const int q = feature_dim(n);
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(q, q);
    for (NodeId v = 1; v <= n; ++v) mat(p(v) - 1, v - 1) = 1.0;
    for (const auto& e : enumerate_faces(n, 2, false)) {
        const auto mapped = permute_face(e, p);
        mat(slot_of(mapped.nodes(), n), slot_of(e.nodes(), n)) = 1.0;
    }
    return mat;
}

ComposeCheck compose_check(const LOperator& first, const LOperator& second, int n_nodes) {
    if (n_nodes < 5) throw invalid_signature_error("composition checks need at least 5 nodes");
    if (first.out_size != second.in_size)
        throw invalid_signature_error("operators do not compose: middle sizes differ");

    ComposeCheck r;
    r.first = first;
    r.second = second;
    const int lo = std::max(0, first.matched + second.matched - first.out_size);
    const int hi = std::min(first.matched, second.matched);
    for (int k = lo; k <= hi; ++k) r.predicted.push_back(k);

    const auto a = build_L(first, n_nodes).mat;
    const auto b = build_L(second, n_nodes).mat;
    const Eigen::MatrixXd target = b * a;
    const auto q = target.size();

    Eigen::MatrixXd basis(q, static_cast<Eigen::Index>(r.predicted.size()));
    for (std::size_t i = 0; i < r.predicted.size(); ++i) {
        const auto m = build_L({first.in_size, second.out_size, r.predicted[i]}, n_nodes).mat;
        basis.col(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::VectorXd>(m.data(), q);
    }
    const Eigen::Map<const Eigen::VectorXd> y(target.data(), q);
    r.coefficients = basis.colPivHouseholderQr().solve(y);
    r.residual = (basis * r.coefficients - y).norm();
    return r;
}

namespace {

int rank_of(const std::vector<Eigen::MatrixXd>& mats, double tol) {
    if (mats.empty()) return 0;
    const auto q = mats.front().size();
    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(mats.size()), q);
    for (std::size_t i = 0; i < mats.size(); ++i)
        stacked.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::VectorXd>(mats[i].data(), q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return rank;
}

} // namespace

int span_dimension(std::span<const LOperator> ops, int n_nodes, double tol) {
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(ops.size());
    for (const auto& op : ops) mats.push_back(build_L(op, n_nodes).mat);
    return rank_of(mats, tol);
}

TwoLayerSpanResult two_layer_span_check(int n_nodes) {
    if (n_nodes < 5) throw invalid_signature_error("span checks need at least 5 nodes");
    TwoLayerSpanResult r;
    const auto all = legal_operators();
    std::vector<LOperator> reduced;
    for (const auto& op : all)
        if (!(op.in_size == 2 && op.out_size == 2 && op.matched == 1)) reduced.push_back(op);

    std::vector<Eigen::MatrixXd> full_mats, reduced_mats;
    for (const auto& op : all) full_mats.push_back(build_L(op, n_nodes).mat);
    for (const auto& op : reduced) reduced_mats.push_back(build_L(op, n_nodes).mat);

    auto two_layer = reduced_mats;
    for (const auto& a : reduced)
        for (const auto& b : reduced)
            if (a.out_size == b.in_size)
                two_layer.push_back(build_L(b, n_nodes).mat * build_L(a, n_nodes).mat);

    r.dim_full = rank_of(full_mats, 1e-9);
    r.dim_single = rank_of(reduced_mats, 1e-9);
    r.dim_two_layer = rank_of(two_layer, 1e-9);
    return r;
}

} // namespace incnet::algebra
