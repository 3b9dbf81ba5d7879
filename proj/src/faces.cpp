#include "incnet/faces.hpp"

#include <algorithm>
#include <string>

#include "incnet/combinatorics.hpp"

namespace incnet {

namespace {

void check_nodes(std::span<const NodeId> nodes, bool sorted_required) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] < 1) throw invalid_face_error("node ids are 1-based");
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j]) throw invalid_face_error("face nodes must be distinct");
    }
    if (sorted_required && !std::is_sorted(nodes.begin(), nodes.end()))
        throw invalid_face_error("undirected face not in canonical order");
}

} // namespace

Permutation::Permutation(std::vector<NodeId> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (NodeId v : image_) {
        if (v < 1 || v > static_cast<NodeId>(image_.size()) || seen[v - 1])
            throw invalid_face_error("not a permutation of 1..n");
        seen[v - 1] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<NodeId> im(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) im[v - 1] = v;
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<NodeId> im(image_.size());
    for (int v = 1; v <= size(); ++v) im[image_[v - 1] - 1] = v;
    return Permutation(std::move(im));
}

Permutation Permutation::after(const Permutation& first) const {
    if (size() != first.size()) throw invalid_face_error("permutation size mismatch");
    std::vector<NodeId> im(image_.size());
    for (int v = 1; v <= size(); ++v) im[v - 1] = (*this)(first(v));
    return Permutation(std::move(im));
}

Face::Face(std::vector<NodeId> nodes, bool directed)
    : nodes_(std::move(nodes)), directed_(directed) {
    if (!directed_) std::sort(nodes_.begin(), nodes_.end());
    check_nodes(nodes_, false);
}

std::int64_t face_count(int n_nodes, int face_size, bool directed) {
    if (n_nodes < 0 || face_size < 0) throw invalid_signature_error("negative size");
    if (face_size == 0) return 1;
    return directed ? falling_factorial(n_nodes, face_size) : binomial(n_nodes, face_size);
}

std::vector<Face> enumerate_faces(int n_nodes, int face_size, bool directed) {
    if (face_size < 1 || face_size > n_nodes)
        throw invalid_signature_error("face size must be in 1..n_nodes");
    std::vector<Face> out;
    out.reserve(static_cast<std::size_t>(face_count(n_nodes, face_size, directed)));
    detail::for_each_face_tuple(n_nodes, face_size, directed, [&](std::span<const NodeId> t) {
        out.emplace_back(std::vector<NodeId>(t.begin(), t.end()), directed);
    });
    return out;
}

std::int64_t face_to_index(const Face& f, int n_nodes) {
    for (NodeId v : f.nodes())
        if (v > n_nodes) throw invalid_face_error("node id exceeds n_nodes");
    return detail::tuple_to_index(f.nodes(), n_nodes, f.is_directed());
}

Face index_to_face(std::int64_t index, int n_nodes, int face_size, bool directed) {
    if (index < 0 || index >= face_count(n_nodes, face_size, directed))
        throw invalid_face_error("face index out of range");
    std::vector<NodeId> nodes(static_cast<std::size_t>(face_size));
    detail::index_to_tuple(index, n_nodes, face_size, directed, nodes);
    return Face(std::move(nodes), directed);
}

Face permute_face(const Face& f, const Permutation& p) {
    std::vector<NodeId> nodes(f.nodes().begin(), f.nodes().end());
    for (NodeId& v : nodes) {
        if (v > p.size()) throw invalid_face_error("node id exceeds permutation size");
        v = p(v);
    }
    return Face(std::move(nodes), f.is_directed());
}

namespace detail {

std::int64_t tuple_to_index(std::span<const NodeId> nodes, int n_nodes, bool directed) {
    const int m = static_cast<int>(nodes.size());
    if (m == 0) return 0;
    if (directed) {
        // Lexicographic rank over injective tuples: count unused smaller
        // values at each position, weighted by arrangements of the rest.
        std::vector<bool> used(static_cast<std::size_t>(n_nodes) + 1, false);
        std::int64_t rank = 0;
        for (int i = 0; i < m; ++i) {
            int smaller = 0;
            for (NodeId v = 1; v < nodes[i]; ++v)
                if (!used[v]) ++smaller;
            rank += smaller * falling_factorial(n_nodes - i - 1, m - i - 1);
            used[nodes[i]] = true;
        }
        return rank;
    }
    check_nodes(nodes, true);
    std::int64_t rank = 0;
    NodeId prev = 0;
    for (int i = 0; i < m; ++i) {
        for (NodeId v = prev + 1; v < nodes[i]; ++v) rank += binomial(n_nodes - v, m - 1 - i);
        prev = nodes[i];
    }
    return rank;
}

void index_to_tuple(std::int64_t index, int n_nodes, int face_size, bool directed,
                    std::span<NodeId> out) {
    if (directed) {
        std::vector<NodeId> avail;
        avail.reserve(static_cast<std::size_t>(n_nodes));
        for (NodeId v = 1; v <= n_nodes; ++v) avail.push_back(v);
        for (int i = 0; i < face_size; ++i) {
            const std::int64_t rest = falling_factorial(n_nodes - i - 1, face_size - i - 1);
            const auto pick = static_cast<std::size_t>(index / rest);
            out[static_cast<std::size_t>(i)] = avail[pick];
            avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(pick));
            index %= rest;
        }
        return;
    }
    NodeId v = 1;
    for (int i = 0; i < face_size; ++i) {
        for (;; ++v) {
            const std::int64_t below = binomial(n_nodes - v, face_size - 1 - i);
            if (index < below) break;
            index -= below;
        }
        out[static_cast<std::size_t>(i)] = v++;
    }
}

void for_each_face_tuple(int n_nodes, int face_size, bool directed,
                         const std::function<void(std::span<const NodeId>)>& fn) {
    std::vector<NodeId> t(static_cast<std::size_t>(face_size));
    if (face_size == 0) {
        fn(t);
        return;
    }
    if (face_size > n_nodes) return;
    if (directed) {
        std::vector<bool> used(static_cast<std::size_t>(n_nodes) + 1, false);
        auto rec = [&](auto&& self, int depth) -> void {
            if (depth == face_size) {
                fn(t);
                return;
            }
            for (NodeId v = 1; v <= n_nodes; ++v) {
                if (used[v]) continue;
                used[v] = true;
                t[static_cast<std::size_t>(depth)] = v;
                self(self, depth + 1);
                used[v] = false;
            }
        };
        rec(rec, 0);
        return;
    }
    auto rec = [&](auto&& self, int depth, NodeId from) -> void {
        if (depth == face_size) {
            fn(t);
            return;
        }
        for (NodeId v = from; v <= n_nodes - (face_size - depth - 1); ++v) {
            t[static_cast<std::size_t>(depth)] = v;
            self(self, depth + 1, v + 1);
        }
    };
    rec(rec, 0, 1);
}

} // namespace detail

} // namespace incnet
