#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "incnet/errors.hpp"

namespace incnet {

// Node ids are 1-based; 1..n_nodes are valid in a context with n_nodes nodes.
using NodeId = int;

class Permutation {
public:
    // image[v-1] is the image of node v. Must be a bijection on 1..n.
    explicit Permutation(std::vector<NodeId> image);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(image_.size()); }
    NodeId operator()(NodeId v) const { return image_[static_cast<std::size_t>(v) - 1]; }
    Permutation inverse() const;
    // Composition: (*this).after(first) maps v to (*this)(first(v)).
    Permutation after(const Permutation& first) const;
    const std::vector<NodeId>& image() const { return image_; }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<NodeId> image_;
};

// A face is a tuple of pairwise-distinct node ids. Directed faces keep their
// order; undirected faces are stored sorted ascending (canonical form).
class Face {
public:
    Face(std::vector<NodeId> nodes, bool directed);

    static Face directed(std::vector<NodeId> nodes) { return Face(std::move(nodes), true); }
    static Face undirected(std::vector<NodeId> nodes) { return Face(std::move(nodes), false); }

    int size() const { return static_cast<int>(nodes_.size()); }
    bool is_directed() const { return directed_; }
    std::span<const NodeId> nodes() const { return nodes_; }

    friend bool operator==(const Face&, const Face&) = default;
    friend std::strong_ordering operator<=>(const Face&, const Face&) = default;

private:
    std::vector<NodeId> nodes_;
    bool directed_;
};

// Number of faces of a given size: C(n, m) undirected, n!/(n-m)! directed.
// face_size 0 yields 1 (the empty face); face_size > n_nodes yields 0.
std::int64_t face_count(int n_nodes, int face_size, bool directed);

// All faces of one size in canonical order (lexicographic over node tuples).
// Rejects face_size < 1 or face_size > n_nodes.
std::vector<Face> enumerate_faces(int n_nodes, int face_size, bool directed);

// Position of a face in the canonical enumeration (0-based) and its inverse.
std::int64_t face_to_index(const Face& f, int n_nodes);
Face index_to_face(std::int64_t index, int n_nodes, int face_size, bool directed);

Face permute_face(const Face& f, const Permutation& p);

namespace detail {

// Tuple-level versions used by the dense machinery. Undirected tuples are the
// sorted canonical representatives. face_size 0 is allowed (one empty tuple).
std::int64_t tuple_to_index(std::span<const NodeId> nodes, int n_nodes, bool directed);
void index_to_tuple(std::int64_t index, int n_nodes, int face_size, bool directed,
                    std::span<NodeId> out);
void for_each_face_tuple(int n_nodes, int face_size, bool directed,
                         const std::function<void(std::span<const NodeId>)>& fn);

} // namespace detail

} // namespace incnet
