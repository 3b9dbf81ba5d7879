#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "incnet/faces.hpp"

namespace incnet {

namespace detail {

// Visits every multi-index of the grid with the given per-axis sizes, in
// row-major order. No-op if any axis is empty.
void for_each_entry(std::span<const std::int64_t> counts,
                    const std::function<void(std::span<const std::int64_t>)>& fn);

} // namespace detail

// One tensor dimension: the size of the faces indexing it and whether those
// faces are ordered tuples or node sets.
struct DimSpec {
    int face_size = 1;
    bool directed = true;

    friend bool operator==(const DimSpec&, const DimSpec&) = default;
};

// A node position inside a tensor signature: position `pos` of dimension
// `dim`, both 1-based.
struct PositionRef {
    int dim = 0;
    int pos = 0;

    friend bool operator==(const PositionRef&, const PositionRef&) = default;
    friend auto operator<=>(const PositionRef&, const PositionRef&) = default;
};

// Groups of positions that must hold equal node ids for an entry to be
// nonzero. Groups are pairwise disjoint and may not tie two positions of the
// same dimension (faces have distinct nodes, so that would be unsatisfiable).
//
// For undirected dimensions literal positions refer to the sorted canonical
// representative, which is not stable under node relabeling; constraint
// satisfaction there is therefore interpreted up to reordering within each
// undirected face ("the node appears somewhere in the face").
class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::vector<std::vector<PositionRef>> groups);

    const std::vector<std::vector<PositionRef>>& groups() const { return groups_; }
    bool empty() const { return groups_.empty(); }

    // Range/feasibility checks against a concrete dimension list.
    void validate_for(std::span<const DimSpec> dims) const;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

private:
    std::vector<std::vector<PositionRef>> groups_;
};

// Values indexed by the faces of one size, channels on the trailing axis.
// The workhorse carrier for orbit data; most operations require directed
// face-vectors, but the type also carries per-face data for undirected faces.
class FaceVector {
public:
    FaceVector(int n_nodes, int face_size, bool directed, int channels);

    int n_nodes() const { return n_nodes_; }
    int face_size() const { return face_size_; }
    bool is_directed() const { return directed_; }
    int channels() const { return channels_; }
    std::int64_t size() const { return count_; } // number of faces

    double at(std::int64_t face_index, int channel) const;
    double& at(std::int64_t face_index, int channel);
    double at(const Face& f, int channel) const;
    double& at(const Face& f, int channel);

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    FaceVector permuted(const Permutation& p) const;
    // True when every reordering of a face's node tuple holds the same value
    // (within tol). Trivially true for undirected storage.
    bool argwise_symmetric(double tol) const;

    friend bool operator==(const FaceVector&, const FaceVector&) = default;

private:
    int n_nodes_;
    int face_size_;
    bool directed_;
    int channels_;
    std::int64_t count_;
    std::vector<double> values_;
};

// Dense order-D tensor indexed by one face per dimension, with a constraint
// set describing its sparsity pattern. Entries at positions whose equality
// pattern is ruled out by the constraints must be zero.
class IncidenceTensor {
public:
    IncidenceTensor(int n_nodes, std::vector<DimSpec> dims, ConstraintSet constraints,
                    int channels);

    int n_nodes() const { return n_nodes_; }
    const std::vector<DimSpec>& dims() const { return dims_; }
    const ConstraintSet& constraints() const { return constraints_; }
    int channels() const { return channels_; }

    const std::vector<std::int64_t>& dim_face_counts() const { return counts_; }
    std::int64_t entry_count() const { return entries_; } // channels excluded

    double value(std::span<const std::int64_t> face_indices, int channel) const;
    double& value(std::span<const std::int64_t> face_indices, int channel);
    std::int64_t entry_offset(std::span<const std::int64_t> face_indices) const;

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    // Whether the equality pattern at these face indices is compatible with
    // the constraint set (see ConstraintSet notes on undirected dimensions).
    bool entry_allowed(std::span<const std::int64_t> face_indices) const;

    friend bool operator==(const IncidenceTensor&, const IncidenceTensor&) = default;

private:
    int n_nodes_;
    std::vector<DimSpec> dims_;
    ConstraintSet constraints_;
    int channels_;
    std::vector<std::int64_t> counts_;
    std::int64_t entries_;
    std::vector<double> values_;
};

// A partition of the position set {(d, i)} in canonical form: blocks ordered
// by smallest member, members sorted, plus the restricted-growth string over
// positions in (d, i)-lex order.
class SetPartition {
public:
    SetPartition(std::vector<int> rgs, std::span<const DimSpec> dims);

    const std::vector<int>& rgs() const { return rgs_; }
    const std::vector<std::vector<PositionRef>>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }

    friend bool operator==(const SetPartition&, const SetPartition&) = default;

private:
    std::vector<int> rgs_;
    std::vector<std::vector<PositionRef>> blocks_;
};

// All partitions of the position set such that (a) positions of the same
// dimension land in different blocks and (b) each constraint group lies
// inside one block; for constraint groups touching undirected dimensions,
// (b) holds up to reordering within each undirected face. Sorted by
// restricted-growth string.
std::vector<SetPartition> enumerate_valid_partitions(std::span<const DimSpec> dims,
                                                     const ConstraintSet& constraints);

// Number of valid partitions with exactly m blocks.
std::int64_t multiplicity(std::span<const DimSpec> dims, const ConstraintSet& constraints, int m);

struct DecompositionPart {
    int face_size = 0;  // m, the block count of the partition
    int copy = 0;       // 1-based copy index within equal face_size
    SetPartition partition;
    FaceVector values;
};

struct OrbitDecomposition {
    int n_nodes = 0;
    std::vector<DimSpec> dims;
    ConstraintSet constraints;
    int channels = 1;
    // Ordered by (face_size, partition rgs); values are directed face-vectors.
    std::vector<DecompositionPart> parts;
};

// Splits a tensor into one directed face-vector per valid partition: the part
// for a partition with blocks (b_1, ..., b_m) holds, at directed face
// (v_1, ..., v_m), the tensor entry in which every position of block b_j
// carries node v_j. Undirected dimensions are read through their directed
// cover. Rejects tensors whose nonzero entries violate the constraints.
OrbitDecomposition decompose(const IncidenceTensor& t);

// Exact inverse of decompose on valid tensors.
IncidenceTensor reassemble(const OrbitDecomposition& d);

IncidenceTensor permute_tensor(const IncidenceTensor& t, const Permutation& p);

struct DensifyResult {
    IncidenceTensor tensor;
    std::vector<double> mask; // entry grid, channels excluded, values in {0,1}
};

// Dense tensor over all faces of each size with an indicator mask: 1 exactly
// on entries whose every face index appears in the corresponding present-face
// list. Tensor values equal the mask (one channel).
DensifyResult densify(const std::vector<std::vector<Face>>& faces_present, int n_nodes,
                      std::vector<DimSpec> dims);

} // namespace incnet
