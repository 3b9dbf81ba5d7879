#include "incnet/tensors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "incnet/combinatorics.hpp"

namespace incnet {

namespace {

std::vector<PositionRef> all_positions(std::span<const DimSpec> dims) {
    std::vector<PositionRef> out;
    for (int d = 0; d < static_cast<int>(dims.size()); ++d)
        for (int i = 1; i <= dims[static_cast<std::size_t>(d)].face_size; ++i)
            out.push_back({d + 1, i});
    return out;
}

int position_index(std::span<const DimSpec> dims, PositionRef p) {
    int idx = 0;
    for (int d = 1; d < p.dim; ++d) idx += dims[static_cast<std::size_t>(d - 1)].face_size;
    return idx + p.pos - 1;
}

// Canonical restricted-growth form of an arbitrary block assignment.
std::vector<int> canonical_rgs(std::span<const int> assignment) {
    std::vector<int> out(assignment.size());
    std::map<int, int> relabel;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        auto [it, fresh] = relabel.try_emplace(assignment[i], static_cast<int>(relabel.size()));
        out[i] = it->second;
    }
    return out;
}

// Equality pattern of an entry given the flat node list over positions.
std::vector<int> nodes_to_rgs(std::span<const NodeId> flat_nodes) {
    std::vector<int> ids(flat_nodes.begin(), flat_nodes.end());
    return canonical_rgs(ids);
}

bool satisfies_groups(std::span<const int> rgs, std::span<const DimSpec> dims,
                      const ConstraintSet& cs) {
    for (const auto& group : cs.groups()) {
        const int want = rgs[static_cast<std::size_t>(position_index(dims, group.front()))];
        for (const auto& p : group)
            if (rgs[static_cast<std::size_t>(position_index(dims, p))] != want) return false;
    }
    return true;
}

// Valid partitions as sorted restricted-growth strings. Positions of one
// dimension always land in different blocks; constraint groups must be
// co-blocked, up to reordering within undirected faces (mirror closure).
std::vector<std::vector<int>> valid_rgs(std::span<const DimSpec> dims, const ConstraintSet& cs) {
    cs.validate_for(dims);
    const auto positions = all_positions(dims);
    const int total = static_cast<int>(positions.size());

    std::vector<std::vector<int>> same_face_ok;
    std::vector<int> rgs(static_cast<std::size_t>(total), 0);
    auto rec = [&](auto&& self, int p, int used) -> void {
        if (p == total) {
            same_face_ok.push_back(rgs);
            return;
        }
        for (int b = 0; b <= used; ++b) {
            bool clash = false;
            for (int q = 0; q < p; ++q)
                if (positions[static_cast<std::size_t>(q)].dim ==
                        positions[static_cast<std::size_t>(p)].dim &&
                    rgs[static_cast<std::size_t>(q)] == b) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            rgs[static_cast<std::size_t>(p)] = b;
            self(self, p + 1, std::max(used, b + 1));
        }
    };
    rec(rec, 0, 0);

    if (cs.empty()) return same_face_ok;

    std::vector<std::vector<int>> literal;
    for (const auto& r : same_face_ok)
        if (satisfies_groups(r, dims, cs)) literal.push_back(r);

    bool any_undirected = false;
    for (const auto& d : dims) any_undirected |= (!d.directed && d.face_size > 1);
    if (!any_undirected) return literal;

    // Orbit of the literal set under within-face position permutations of
    // undirected dimensions.
    std::vector<std::vector<std::vector<int>>> dim_perms; // 0-based position maps per dim
    for (const auto& d : dims) {
        std::vector<std::vector<int>> perms;
        std::vector<int> ident(static_cast<std::size_t>(d.face_size));
        std::iota(ident.begin(), ident.end(), 0);
        if (d.directed || d.face_size <= 1) {
            perms.push_back(ident);
        } else {
            std::vector<int> p = ident;
            do perms.push_back(p);
            while (std::next_permutation(p.begin(), p.end()));
        }
        dim_perms.push_back(std::move(perms));
    }
    std::set<std::vector<int>> closed;
    std::vector<std::size_t> pick(dims.size(), 0);
    for (const auto& r : literal) {
        std::fill(pick.begin(), pick.end(), 0);
        for (;;) {
            std::vector<int> mapped(r.size());
            for (int d = 0; d < static_cast<int>(dims.size()); ++d) {
                const auto& perm = dim_perms[static_cast<std::size_t>(d)][pick[static_cast<std::size_t>(d)]];
                for (int i = 0; i < dims[static_cast<std::size_t>(d)].face_size; ++i) {
                    const int from = position_index(dims, {d + 1, i + 1});
                    const int to = position_index(dims, {d + 1, perm[static_cast<std::size_t>(i)] + 1});
                    mapped[static_cast<std::size_t>(to)] = r[static_cast<std::size_t>(from)];
                }
            }
            closed.insert(canonical_rgs(mapped));
            int d = 0;
            for (; d < static_cast<int>(dims.size()); ++d) {
                if (++pick[static_cast<std::size_t>(d)] < dim_perms[static_cast<std::size_t>(d)].size()) break;
                pick[static_cast<std::size_t>(d)] = 0;
            }
            if (d == static_cast<int>(dims.size())) break;
        }
    }
    return {closed.begin(), closed.end()};
}

// Flat node list of an entry given per-dimension face indices.
void entry_nodes(const IncidenceTensor& t, std::span<const std::int64_t> face_indices,
                 std::vector<NodeId>& out) {
    out.clear();
    std::vector<NodeId> buf;
    for (std::size_t d = 0; d < t.dims().size(); ++d) {
        const auto& spec = t.dims()[d];
        buf.resize(static_cast<std::size_t>(spec.face_size));
        detail::index_to_tuple(face_indices[d], t.n_nodes(), spec.face_size, spec.directed, buf);
        out.insert(out.end(), buf.begin(), buf.end());
    }
}

} // namespace

namespace detail {

void for_each_entry(std::span<const std::int64_t> counts,
                    const std::function<void(std::span<const std::int64_t>)>& fn) {
    for (std::int64_t c : counts)
        if (c == 0) return;
    std::vector<std::int64_t> idx(counts.size(), 0);
    for (;;) {
        fn(idx);
        std::size_t d = counts.size();
        while (d > 0) {
            --d;
            if (++idx[d] < counts[d]) break;
            idx[d] = 0;
            if (d == 0) return;
        }
        if (counts.empty()) return;
    }
}

} // namespace detail

using detail::for_each_entry;

ConstraintSet::ConstraintSet(std::vector<std::vector<PositionRef>> groups)
    : groups_(std::move(groups)) {
    std::set<PositionRef> seen;
    for (const auto& g : groups_) {
        if (g.size() < 2)
            throw infeasible_constraints_error("constraint group needs at least two positions");
        for (const auto& p : g)
            if (!seen.insert(p).second)
                throw infeasible_constraints_error("constraint groups must be pairwise disjoint");
    }
}

void ConstraintSet::validate_for(std::span<const DimSpec> dims) const {
    for (const auto& g : groups_) {
        std::set<int> dims_in_group;
        for (const auto& p : g) {
            if (p.dim < 1 || p.dim > static_cast<int>(dims.size()))
                throw infeasible_constraints_error("constraint dimension out of range");
            if (p.pos < 1 || p.pos > dims[static_cast<std::size_t>(p.dim - 1)].face_size)
                throw infeasible_constraints_error("constraint position out of range");
            if (!dims_in_group.insert(p.dim).second)
                throw infeasible_constraints_error(
                    "constraint group ties two positions of one face");
        }
    }
}

FaceVector::FaceVector(int n_nodes, int face_size, bool directed, int channels)
    : n_nodes_(n_nodes), face_size_(face_size), directed_(directed), channels_(channels),
      count_(face_count(n_nodes, face_size, directed)) {
    if (n_nodes < 1) throw invalid_signature_error("n_nodes must be positive");
    if (face_size < 0) throw invalid_signature_error("face size must be nonnegative");
    if (channels < 1) throw invalid_signature_error("channels must be positive");
    values_.assign(static_cast<std::size_t>(count_ * channels_), 0.0);
}

double FaceVector::at(std::int64_t face_index, int channel) const {
    return values_[static_cast<std::size_t>(face_index * channels_ + channel)];
}

double& FaceVector::at(std::int64_t face_index, int channel) {
    return values_[static_cast<std::size_t>(face_index * channels_ + channel)];
}

double FaceVector::at(const Face& f, int channel) const {
    if (f.is_directed() != directed_ || f.size() != face_size_)
        throw invalid_face_error("face does not match vector signature");
    return at(face_to_index(f, n_nodes_), channel);
}

double& FaceVector::at(const Face& f, int channel) {
    if (f.is_directed() != directed_ || f.size() != face_size_)
        throw invalid_face_error("face does not match vector signature");
    return at(face_to_index(f, n_nodes_), channel);
}

FaceVector FaceVector::permuted(const Permutation& p) const {
    if (p.size() != n_nodes_) throw invalid_face_error("permutation size mismatch");
    FaceVector out(n_nodes_, face_size_, directed_, channels_);
    std::vector<NodeId> mapped(static_cast<std::size_t>(face_size_));
    std::int64_t idx = 0;
    detail::for_each_face_tuple(n_nodes_, face_size_, directed_, [&](std::span<const NodeId> t) {
        for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = p(t[i]);
        if (!directed_) std::sort(mapped.begin(), mapped.end());
        const std::int64_t to = detail::tuple_to_index(mapped, n_nodes_, directed_);
        for (int c = 0; c < channels_; ++c) out.at(to, c) = at(idx, c);
        ++idx;
    });
    return out;
}

bool FaceVector::argwise_symmetric(double tol) const {
    if (!directed_ || face_size_ <= 1) return true;
    bool ok = true;
    std::int64_t idx = 0;
    detail::for_each_face_tuple(n_nodes_, face_size_, true, [&](std::span<const NodeId> t) {
        std::vector<NodeId> perm(t.begin(), t.end());
        std::sort(perm.begin(), perm.end());
        do {
            const std::int64_t other = detail::tuple_to_index(perm, n_nodes_, true);
            for (int c = 0; c < channels_; ++c)
                if (std::abs(at(other, c) - at(idx, c)) > tol) ok = false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        ++idx;
    });
    return ok;
}

IncidenceTensor::IncidenceTensor(int n_nodes, std::vector<DimSpec> dims, ConstraintSet constraints,
                                 int channels)
    : n_nodes_(n_nodes), dims_(std::move(dims)), constraints_(std::move(constraints)),
      channels_(channels) {
    if (n_nodes < 1) throw invalid_signature_error("n_nodes must be positive");
    if (dims_.empty()) throw invalid_signature_error("tensor needs at least one dimension");
    if (channels < 1) throw invalid_signature_error("channels must be positive");
    for (const auto& d : dims_)
        if (d.face_size < 1 || d.face_size > n_nodes_)
            throw invalid_signature_error("dimension face size must be in 1..n_nodes");
    constraints_.validate_for(dims_);
    entries_ = 1;
    for (const auto& d : dims_) {
        counts_.push_back(face_count(n_nodes_, d.face_size, d.directed));
        entries_ *= counts_.back();
    }
    values_.assign(static_cast<std::size_t>(entries_ * channels_), 0.0);
}

std::int64_t IncidenceTensor::entry_offset(std::span<const std::int64_t> face_indices) const {
    std::int64_t off = 0;
    for (std::size_t d = 0; d < counts_.size(); ++d) {
        if (face_indices[d] < 0 || face_indices[d] >= counts_[d])
            throw invalid_face_error("face index out of range");
        off = off * counts_[d] + face_indices[d];
    }
    return off;
}

double IncidenceTensor::value(std::span<const std::int64_t> face_indices, int channel) const {
    return values_[static_cast<std::size_t>(entry_offset(face_indices) * channels_ + channel)];
}

double& IncidenceTensor::value(std::span<const std::int64_t> face_indices, int channel) {
    return values_[static_cast<std::size_t>(entry_offset(face_indices) * channels_ + channel)];
}

bool IncidenceTensor::entry_allowed(std::span<const std::int64_t> face_indices) const {
    if (constraints_.empty()) return true;
    const auto valid = valid_rgs(dims_, constraints_);
    std::vector<NodeId> nodes;
    entry_nodes(*this, face_indices, nodes);
    const auto rgs = nodes_to_rgs(nodes);
    return std::binary_search(valid.begin(), valid.end(), rgs);
}

SetPartition::SetPartition(std::vector<int> rgs, std::span<const DimSpec> dims)
    : rgs_(std::move(rgs)) {
    const auto positions = all_positions(dims);
    if (positions.size() != rgs_.size())
        throw invalid_signature_error("partition length does not match dimensions");
    const auto canon = canonical_rgs(rgs_);
    if (canon != rgs_) throw invalid_signature_error("partition not in restricted-growth form");
    const int m = rgs_.empty() ? 0 : *std::max_element(rgs_.begin(), rgs_.end()) + 1;
    blocks_.resize(static_cast<std::size_t>(m));
    for (std::size_t p = 0; p < positions.size(); ++p)
        blocks_[static_cast<std::size_t>(rgs_[p])].push_back(positions[p]);
}

std::vector<SetPartition> enumerate_valid_partitions(std::span<const DimSpec> dims,
                                                     const ConstraintSet& constraints) {
    if (dims.empty()) throw invalid_signature_error("at least one dimension required");
    for (const auto& d : dims)
        if (d.face_size < 1) throw invalid_signature_error("face size must be positive");
    std::vector<SetPartition> out;
    for (auto& rgs : valid_rgs(dims, constraints)) out.emplace_back(std::move(rgs), dims);
    return out;
}

std::int64_t multiplicity(std::span<const DimSpec> dims, const ConstraintSet& constraints, int m) {
    int total = 0;
    for (const auto& d : dims) total += d.face_size;
    if (m < 1 || m > total) throw invalid_signature_error("block count out of range");
    std::int64_t count = 0;
    for (const auto& rgs : valid_rgs(dims, constraints)) {
        const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (blocks == m) ++count;
    }
    return count;
}

OrbitDecomposition decompose(const IncidenceTensor& t) {
    auto rgs_list = valid_rgs(t.dims(), t.constraints());
    std::set<std::vector<int>> valid(rgs_list.begin(), rgs_list.end());

    std::vector<NodeId> nodes;
    for_each_entry(t.dim_face_counts(), [&](std::span<const std::int64_t> idx) {
        entry_nodes(t, idx, nodes);
        if (valid.count(nodes_to_rgs(nodes))) return;
        for (int c = 0; c < t.channels(); ++c)
            if (t.value(idx, c) != 0.0)
                throw inconsistent_decomposition_error(
                    "nonzero entry violates the constraint pattern");
    });

    std::sort(rgs_list.begin(), rgs_list.end(), [](const auto& a, const auto& b) {
        const int ma = *std::max_element(a.begin(), a.end()) + 1;
        const int mb = *std::max_element(b.begin(), b.end()) + 1;
        return std::tie(ma, a) < std::tie(mb, b);
    });

    OrbitDecomposition d;
    d.n_nodes = t.n_nodes();
    d.dims = t.dims();
    d.constraints = t.constraints();
    d.channels = t.channels();

    const auto& dims = t.dims();
    int last_m = 0;
    int copy = 0;
    for (auto& rgs : rgs_list) {
        const int m = *std::max_element(rgs.begin(), rgs.end()) + 1;
        copy = (m == last_m) ? copy + 1 : 1;
        last_m = m;

        FaceVector fv(t.n_nodes(), m, true, t.channels());
        std::vector<std::int64_t> face_idx(dims.size());
        std::vector<NodeId> buf;
        std::int64_t out_idx = 0;
        detail::for_each_face_tuple(t.n_nodes(), m, true, [&](std::span<const NodeId> v) {
            int p = 0;
            for (std::size_t dd = 0; dd < dims.size(); ++dd) {
                buf.resize(static_cast<std::size_t>(dims[dd].face_size));
                for (int i = 0; i < dims[dd].face_size; ++i)
                    buf[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(rgs[static_cast<std::size_t>(p++)])];
                if (!dims[dd].directed) std::sort(buf.begin(), buf.end());
                face_idx[dd] = detail::tuple_to_index(buf, t.n_nodes(), dims[dd].directed);
            }
            for (int c = 0; c < t.channels(); ++c) fv.at(out_idx, c) = t.value(face_idx, c);
            ++out_idx;
        });
        d.parts.push_back({m, copy, SetPartition(std::move(rgs), dims), std::move(fv)});
    }
    return d;
}

IncidenceTensor reassemble(const OrbitDecomposition& d) {
    IncidenceTensor t(d.n_nodes, d.dims, d.constraints, d.channels);

    auto expected = valid_rgs(d.dims, d.constraints);
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
        const int ma = *std::max_element(a.begin(), a.end()) + 1;
        const int mb = *std::max_element(b.begin(), b.end()) + 1;
        return std::tie(ma, a) < std::tie(mb, b);
    });
    if (expected.size() != d.parts.size())
        throw inconsistent_decomposition_error("part count does not match the valid partitions");
    std::map<std::vector<int>, const DecompositionPart*> by_rgs;
    for (std::size_t i = 0; i < d.parts.size(); ++i) {
        const auto& part = d.parts[i];
        if (part.partition.rgs() != expected[i])
            throw inconsistent_decomposition_error("unexpected partition among the parts");
        if (part.face_size != part.partition.block_count())
            throw inconsistent_decomposition_error("part size disagrees with its partition");
        const auto& fv = part.values;
        if (!fv.is_directed() || fv.face_size() != part.face_size || fv.n_nodes() != d.n_nodes ||
            fv.channels() != d.channels)
            throw inconsistent_decomposition_error("part face-vector signature mismatch");
        by_rgs[part.partition.rgs()] = &part;
    }

    // Mirror-related partitions carry the same undirected data; reject
    // contradictory overlaps before reading anything.
    const auto positions = all_positions(d.dims);
    for (const auto& [rgs, part] : by_rgs) {
        std::vector<std::vector<std::vector<int>>> dim_perms;
        for (const auto& spec : d.dims) {
            std::vector<std::vector<int>> perms;
            std::vector<int> ident(static_cast<std::size_t>(spec.face_size));
            std::iota(ident.begin(), ident.end(), 0);
            if (spec.directed || spec.face_size <= 1) {
                perms.push_back(ident);
            } else {
                std::vector<int> p = ident;
                do perms.push_back(p);
                while (std::next_permutation(p.begin(), p.end()));
            }
            dim_perms.push_back(std::move(perms));
        }
        std::vector<std::size_t> pick(d.dims.size(), 0);
        for (;;) {
            std::vector<int> mapped(rgs.size());
            for (int dd = 0; dd < static_cast<int>(d.dims.size()); ++dd) {
                const auto& perm = dim_perms[static_cast<std::size_t>(dd)][pick[static_cast<std::size_t>(dd)]];
                for (int i = 0; i < d.dims[static_cast<std::size_t>(dd)].face_size; ++i) {
                    const int from = position_index(d.dims, {dd + 1, i + 1});
                    const int to = position_index(d.dims, {dd + 1, perm[static_cast<std::size_t>(i)] + 1});
                    mapped[static_cast<std::size_t>(to)] = rgs[static_cast<std::size_t>(from)];
                }
            }
            // Relabel map: block b of `rgs` appears in `mapped` as block
            // canon(mapped)[first position of b in mapped].
            const auto canon = canonical_rgs(mapped);
            auto it = by_rgs.find(canon);
            if (it != by_rgs.end() && it->second != part) {
                const int m = part->face_size;
                std::vector<int> where(static_cast<std::size_t>(m), -1);
                for (std::size_t p = 0; p < mapped.size(); ++p)
                    if (where[static_cast<std::size_t>(mapped[p])] < 0)
                        where[static_cast<std::size_t>(mapped[p])] = canon[p];
                std::vector<NodeId> w(static_cast<std::size_t>(m));
                std::int64_t src_idx = 0;
                bool ok = true;
                detail::for_each_face_tuple(d.n_nodes, m, true, [&](std::span<const NodeId> v) {
                    for (int b = 0; b < m; ++b)
                        w[static_cast<std::size_t>(where[static_cast<std::size_t>(b)])] =
                            v[static_cast<std::size_t>(b)];
                    const std::int64_t dst_idx = detail::tuple_to_index(w, d.n_nodes, true);
                    for (int c = 0; c < d.channels; ++c)
                        if (part->values.at(src_idx, c) != it->second->values.at(dst_idx, c))
                            ok = false;
                    ++src_idx;
                });
                if (!ok)
                    throw inconsistent_decomposition_error(
                        "mirror-related parts disagree on shared entries");
            }
            int dd = 0;
            for (; dd < static_cast<int>(d.dims.size()); ++dd) {
                if (++pick[static_cast<std::size_t>(dd)] < dim_perms[static_cast<std::size_t>(dd)].size()) break;
                pick[static_cast<std::size_t>(dd)] = 0;
            }
            if (dd == static_cast<int>(d.dims.size())) break;
        }
    }

    std::vector<NodeId> nodes;
    for_each_entry(t.dim_face_counts(), [&](std::span<const std::int64_t> idx) {
        entry_nodes(t, idx, nodes);
        const auto rgs = nodes_to_rgs(nodes);
        auto it = by_rgs.find(rgs);
        if (it == by_rgs.end()) return;
        const int m = it->second->face_size;
        std::vector<NodeId> v(static_cast<std::size_t>(m));
        for (std::size_t p = 0; p < rgs.size(); ++p)
            v[static_cast<std::size_t>(rgs[p])] = nodes[p];
        const std::int64_t fidx = detail::tuple_to_index(v, d.n_nodes, true);
        for (int c = 0; c < d.channels; ++c) t.value(idx, c) = it->second->values.at(fidx, c);
    });
    return t;
}

IncidenceTensor permute_tensor(const IncidenceTensor& t, const Permutation& p) {
    if (p.size() != t.n_nodes()) throw invalid_face_error("permutation size mismatch");
    IncidenceTensor out(t.n_nodes(), t.dims(), t.constraints(), t.channels());
    std::vector<std::int64_t> target(t.dims().size());
    std::vector<NodeId> buf;
    for_each_entry(t.dim_face_counts(), [&](std::span<const std::int64_t> idx) {
        for (std::size_t d = 0; d < t.dims().size(); ++d) {
            const auto& spec = t.dims()[d];
            buf.resize(static_cast<std::size_t>(spec.face_size));
            detail::index_to_tuple(idx[d], t.n_nodes(), spec.face_size, spec.directed, buf);
            for (NodeId& v : buf) v = p(v);
            if (!spec.directed) std::sort(buf.begin(), buf.end());
            target[d] = detail::tuple_to_index(buf, t.n_nodes(), spec.directed);
        }
        for (int c = 0; c < t.channels(); ++c) out.value(target, c) = t.value(idx, c);
    });
    return out;
}

DensifyResult densify(const std::vector<std::vector<Face>>& faces_present, int n_nodes,
                      std::vector<DimSpec> dims) {
    if (faces_present.size() != dims.size())
        throw invalid_signature_error("one present-face list per dimension required");
    IncidenceTensor tensor(n_nodes, dims, ConstraintSet{}, 1);

    std::vector<std::vector<bool>> present;
    for (std::size_t d = 0; d < dims.size(); ++d) {
        std::vector<bool> mark(static_cast<std::size_t>(tensor.dim_face_counts()[d]), false);
        for (const auto& f : faces_present[d]) {
            if (f.size() != dims[d].face_size || f.is_directed() != dims[d].directed)
                throw invalid_face_error("present face does not match its dimension");
            mark[static_cast<std::size_t>(face_to_index(f, n_nodes))] = true;
        }
        present.push_back(std::move(mark));
    }

    std::vector<double> mask(static_cast<std::size_t>(tensor.entry_count()), 0.0);
    std::int64_t flat = 0;
    for_each_entry(tensor.dim_face_counts(), [&](std::span<const std::int64_t> idx) {
        bool all = true;
        for (std::size_t d = 0; d < idx.size(); ++d)
            all = all && present[d][static_cast<std::size_t>(idx[d])];
        if (all) {
            mask[static_cast<std::size_t>(flat)] = 1.0;
            tensor.value(idx, 0) = 1.0;
        }
        ++flat;
    });
    return {std::move(tensor), std::move(mask)};
}

} // namespace incnet
