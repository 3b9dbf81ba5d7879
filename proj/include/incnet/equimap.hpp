#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "incnet/tensors.hpp"

namespace incnet {

enum class Aggregator { sum, mean, max };

Aggregator aggregator_from_name(const std::string& name);
std::string aggregator_name(Aggregator agg);

// One basis element of the equivariant-map space between directed
// face-vectors: pool the input positions in `pooled`, then place the
// surviving positions (in their original relative order) at the output
// positions listed in `placement`; unmatched output positions broadcast.
struct PoolBroadcastTerm {
    int input_size = 0;
    int output_size = 0;
    std::vector<int> pooled;    // subset of 1..input_size, ascending
    std::vector<int> placement; // injective, values in 1..output_size,
                                // length input_size - pooled.size()

    std::string id() const; // "P={..};B=(..)"

    friend bool operator==(const PoolBroadcastTerm&, const PoolBroadcastTerm&) = default;
};

PoolBroadcastTerm parse_term_id(const std::string& id, int input_size, int output_size);

// Sum (or mean/max) over all completions of the pooled positions with nodes
// distinct from each other and from the surviving positions. Surviving
// positions keep their relative order. Requires a directed input.
FaceVector pool(const FaceVector& x, std::span<const int> pooled, Aggregator agg = Aggregator::sum);

// out[(v_1..v_{output_size})] = x[(v_{placement[1]}, ..., v_{placement[k]})].
FaceVector broadcast(const FaceVector& x, std::span<const int> placement, int output_size);

FaceVector apply_term(const FaceVector& x, const PoolBroadcastTerm& term,
                      Aggregator agg = Aggregator::sum);

// All terms between the given sizes, ordered by ascending pooled-set size,
// then lexicographic pooled set, then lexicographic placement.
std::vector<PoolBroadcastTerm> enumerate_terms(int input_size, int output_size);

// Dimension of the equivariant space between directed face-vectors of sizes
// M and M': sum_m C(M,m) C(M',m) m!.
std::int64_t tau(int input_size, int output_size);

// Free parameters after tying argwise-symmetric terms: min(M, M') + 1.
std::int64_t tau_symmetric(int input_size, int output_size);

// Total parameters of a layer over undirected face-vectors of every size
// 1..max_size on both ends: (2 D^3 + 9 D^2 + D) / 6.
std::int64_t symmetric_layer_total(int max_size);

struct BellIdentityResult {
    int degree = 0;          // D
    std::int64_t lhs = 0;    // sum_{m,m'} S(D,m) S(D,m') tau(m,m')
    std::int64_t rhs = 0;    // Bell(2D)
    bool ok = false;
};

BellIdentityResult bell_identity_check(int degree); // 1 <= degree <= 6

struct OrbitSlot {
    int face_size = 0;
    int copies = 0;

    friend bool operator==(const OrbitSlot&, const OrbitSlot&) = default;
};

// The orbit content of one end of a layer: how many face-vector copies of
// each size, plus the channel count. Slots are strictly ascending in size.
struct OrbitSignature {
    std::vector<OrbitSlot> slots;
    int channels = 1;

    void validate() const;
    int total_copies() const;

    friend bool operator==(const OrbitSignature&, const OrbitSignature&) = default;
};

OrbitSignature signature_of(const OrbitDecomposition& d);

std::int64_t total_parameters(const OrbitSignature& input, const OrbitSignature& output,
                              bool symmetric = false);

// A linear map between unions of directed face-vectors, stored as one weight
// per (input copy, output copy, pool/broadcast term, channel pair).
class EquivariantMap {
public:
    EquivariantMap(OrbitSignature input, OrbitSignature output);

    const OrbitSignature& input() const { return input_; }
    const OrbitSignature& output() const { return output_; }

    bool symmetric() const { return symmetric_; }
    void set_symmetric(bool v) { symmetric_ = v; }

    std::int64_t parameter_count() const { return static_cast<std::int64_t>(weights_.size()); }

    const std::vector<PoolBroadcastTerm>& terms(int in_slot, int out_slot) const;

    // Copies are 1-based within their slot; term_index addresses
    // terms(in_slot, out_slot); channels are 0-based.
    double weight(int in_slot, int in_copy, int out_slot, int out_copy, int term_index,
                  int in_channel, int out_channel) const;
    double& weight(int in_slot, int in_copy, int out_slot, int out_copy, int term_index,
                   int in_channel, int out_channel);

    std::span<const double> raw_weights() const { return weights_; }
    std::span<double> raw_weights() { return weights_; }

private:
    std::int64_t offset(int in_slot, int in_copy, int out_slot, int out_copy, int term_index,
                        int in_channel, int out_channel) const;

    OrbitSignature input_;
    OrbitSignature output_;
    bool symmetric_ = false;
    std::vector<std::vector<std::vector<PoolBroadcastTerm>>> terms_; // [in_slot][out_slot]
    std::vector<std::int64_t> block_offsets_;                        // per (is, ic, os, oc)
    std::vector<double> weights_;
};

// Inputs ordered to match the input signature: slots ascending, copies within
// a slot in order. Output follows the output signature the same way.
std::vector<FaceVector> apply_map(const EquivariantMap& map, std::span<const FaceVector> inputs,
                                  Aggregator agg = Aggregator::sum);

// Ties, within every (input copy, output copy) block, all terms with equal
// pooled-set size to their mean; the result has tau_symmetric(m, m') free
// values per block and channel pair.
EquivariantMap symmetrize_map(const EquivariantMap& map);

// apply_map followed by an entrywise mask on each output part. Masks are
// per-face (length = face count) and apply across channels.
std::vector<FaceVector> apply_masked(const EquivariantMap& map, std::span<const FaceVector> inputs,
                                     std::span<const std::vector<double>> masks,
                                     Aggregator agg = Aggregator::sum);

// The relaxed layer: one term per subset of dimensions, each pooling whole
// face axes (not node positions) and broadcasting back. Subset s of the
// weight index includes dimension d when bit d-1 is set; weights are laid out
// [subset][in_channel][out_channel] and all 2^D per channel pair are kept as
// independent parameters even though the subset terms overlap on symmetric
// inputs. Output is dense (empty constraint set).
IncidenceTensor apply_relaxed(const IncidenceTensor& t, std::span<const double> weights,
                              int out_channels, Aggregator agg = Aggregator::sum);

} // namespace incnet
