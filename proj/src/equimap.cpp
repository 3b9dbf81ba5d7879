#include "incnet/equimap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "incnet/combinatorics.hpp"

namespace incnet {

namespace {

// Bell/Stirling by the standard recurrences; exact well past degree 6.
std::int64_t stirling2(int n, int k) {
    if (n == 0 && k == 0) return 1;
    if (n <= 0 || k <= 0 || k > n) return 0;
    std::vector<std::int64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1; // S(0,0)
    for (int nn = 1; nn <= n; ++nn) {
        for (int kk = std::min(nn, k); kk >= 1; --kk)
            row[static_cast<std::size_t>(kk)] =
                kk * row[static_cast<std::size_t>(kk)] + row[static_cast<std::size_t>(kk - 1)];
        row[0] = 0;
    }
    return row[static_cast<std::size_t>(k)];
}

std::int64_t bell_number(int n) {
    std::int64_t total = 0;
    for (int k = 0; k <= n; ++k) total += stirling2(n, k);
    return n == 0 ? 1 : total;
}

void check_positions(std::span<const int> v, int bound, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 1 || v[i] > bound) throw invalid_signature_error(std::string(what) + " position out of range");
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) throw invalid_signature_error(std::string(what) + " positions must be distinct");
    }
}

} // namespace

Aggregator aggregator_from_name(const std::string& name) {
    if (name == "sum") return Aggregator::sum;
    if (name == "mean") return Aggregator::mean;
    if (name == "max") return Aggregator::max;
    throw invalid_signature_error("unknown aggregator: " + name);
}

std::string aggregator_name(Aggregator agg) {
    switch (agg) {
    case Aggregator::sum: return "sum";
    case Aggregator::mean: return "mean";
    case Aggregator::max: return "max";
    }
    return "sum";
}

std::string PoolBroadcastTerm::id() const {
    std::ostringstream os;
    os << "P={";
    for (std::size_t i = 0; i < pooled.size(); ++i) os << (i ? "," : "") << pooled[i];
    os << "};B=(";
    for (std::size_t i = 0; i < placement.size(); ++i) os << (i ? "," : "") << placement[i];
    os << ")";
    return os.str();
}

PoolBroadcastTerm parse_term_id(const std::string& id, int input_size, int output_size) {
    auto grab = [&](char open, char close, std::size_t from) {
        const auto lo = id.find(open, from);
        const auto hi = id.find(close, lo == std::string::npos ? from : lo);
        if (lo == std::string::npos || hi == std::string::npos)
            throw invalid_signature_error("malformed term id: " + id);
        std::vector<int> vals;
        std::string body = id.substr(lo + 1, hi - lo - 1);
        std::istringstream is(body);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) vals.push_back(std::stoi(tok));
        return std::pair{vals, hi};
    };
    if (id.rfind("P=", 0) != 0) throw invalid_signature_error("malformed term id: " + id);
    auto [pooled, at] = grab('{', '}', 0);
    auto [placement, _] = grab('(', ')', at);
    PoolBroadcastTerm t{input_size, output_size, std::move(pooled), std::move(placement)};
    if (!std::is_sorted(t.pooled.begin(), t.pooled.end()))
        throw invalid_signature_error("pooled positions must be ascending: " + id);
    check_positions(t.pooled, input_size, "pooled");
    check_positions(t.placement, output_size, "placement");
    if (static_cast<int>(t.pooled.size() + t.placement.size()) != input_size)
        throw invalid_signature_error("term does not cover the input positions: " + id);
    return t;
}

FaceVector pool(const FaceVector& x, std::span<const int> pooled, Aggregator agg) {
    if (!x.is_directed()) throw invalid_signature_error("pool requires a directed face-vector");
    const int m = x.face_size();
    std::vector<int> p(pooled.begin(), pooled.end());
    std::sort(p.begin(), p.end());
    check_positions(p, m, "pooled");
    const int keep = m - static_cast<int>(p.size());

    std::vector<int> survivors;
    for (int i = 1; i <= m; ++i)
        if (!std::binary_search(p.begin(), p.end(), i)) survivors.push_back(i - 1);

    FaceVector out(x.n_nodes(), keep, true, x.channels());
    const std::int64_t completions =
        falling_factorial(x.n_nodes() - keep, static_cast<int>(p.size()));
    if (completions == 0 && agg != Aggregator::sum)
        throw empty_pool_error("mean/max over an empty pooled set");

    const bool use_max = agg == Aggregator::max;
    if (use_max)
        std::fill(out.values().begin(), out.values().end(),
                  -std::numeric_limits<double>::infinity());

    std::vector<NodeId> key(static_cast<std::size_t>(keep));
    std::int64_t in_idx = 0;
    detail::for_each_face_tuple(x.n_nodes(), m, true, [&](std::span<const NodeId> t) {
        for (std::size_t i = 0; i < survivors.size(); ++i)
            key[i] = t[static_cast<std::size_t>(survivors[i])];
        const std::int64_t out_idx = detail::tuple_to_index(key, x.n_nodes(), true);
        for (int c = 0; c < x.channels(); ++c) {
            double& slot = out.at(out_idx, c);
            const double v = x.at(in_idx, c);
            slot = use_max ? std::max(slot, v) : slot + v;
        }
        ++in_idx;
    });
    if (agg == Aggregator::mean)
        for (double& v : out.values()) v /= static_cast<double>(completions);
    return out;
}

FaceVector broadcast(const FaceVector& x, std::span<const int> placement, int output_size) {
    if (!x.is_directed()) throw invalid_signature_error("broadcast requires a directed face-vector");
    if (static_cast<int>(placement.size()) != x.face_size())
        throw invalid_signature_error("placement must cover every input position");
    check_positions(placement, output_size, "placement");

    FaceVector out(x.n_nodes(), output_size, true, x.channels());
    std::vector<NodeId> key(placement.size());
    std::int64_t out_idx = 0;
    detail::for_each_face_tuple(x.n_nodes(), output_size, true, [&](std::span<const NodeId> t) {
        for (std::size_t j = 0; j < placement.size(); ++j)
            key[j] = t[static_cast<std::size_t>(placement[j] - 1)];
        const std::int64_t in_idx = detail::tuple_to_index(key, x.n_nodes(), true);
        for (int c = 0; c < x.channels(); ++c) out.at(out_idx, c) = x.at(in_idx, c);
        ++out_idx;
    });
    return out;
}

FaceVector apply_term(const FaceVector& x, const PoolBroadcastTerm& term, Aggregator agg) {
    if (term.input_size != x.face_size())
        throw invalid_signature_error("term input size does not match the face-vector");
    if (static_cast<int>(term.pooled.size() + term.placement.size()) != term.input_size)
        throw invalid_signature_error("term does not cover the input positions");
    return broadcast(pool(x, term.pooled, agg), term.placement, term.output_size);
}

std::vector<PoolBroadcastTerm> enumerate_terms(int input_size, int output_size) {
    if (input_size < 0 || output_size < 0) throw invalid_signature_error("negative face size");
    std::vector<PoolBroadcastTerm> out;
    for (int psize = 0; psize <= input_size; ++psize) {
        const int keep = input_size - psize;
        if (keep > output_size) continue;
        // pooled subsets in lexicographic order
        std::vector<int> pooled(static_cast<std::size_t>(psize));
        auto subsets = [&](auto&& self, int depth, int from) -> void {
            if (depth == psize) {
                std::vector<int> placement(static_cast<std::size_t>(keep));
                std::vector<bool> used(static_cast<std::size_t>(output_size) + 1, false);
                auto place = [&](auto&& pself, int d) -> void {
                    if (d == keep) {
                        out.push_back({input_size, output_size, pooled, placement});
                        return;
                    }
                    for (int v = 1; v <= output_size; ++v) {
                        if (used[static_cast<std::size_t>(v)]) continue;
                        used[static_cast<std::size_t>(v)] = true;
                        placement[static_cast<std::size_t>(d)] = v;
                        pself(pself, d + 1);
                        used[static_cast<std::size_t>(v)] = false;
                    }
                };
                place(place, 0);
                return;
            }
            for (int v = from; v <= input_size; ++v) {
                pooled[static_cast<std::size_t>(depth)] = v;
                self(self, depth + 1, v + 1);
            }
        };
        subsets(subsets, 0, 1);
    }
    return out;
}

std::int64_t tau(int input_size, int output_size) {
    if (input_size < 0 || output_size < 0) throw invalid_signature_error("negative face size");
    std::int64_t total = 0;
    for (int m = 0; m <= std::min(input_size, output_size); ++m)
        total += binomial(input_size, m) * binomial(output_size, m) * factorial(m);
    return total;
}

std::int64_t tau_symmetric(int input_size, int output_size) {
    if (input_size < 0 || output_size < 0) throw invalid_signature_error("negative face size");
    return std::min(input_size, output_size) + 1;
}

std::int64_t symmetric_layer_total(int max_size) {
    if (max_size < 1) throw invalid_signature_error("max size must be positive");
    const std::int64_t d = max_size;
    return (2 * d * d * d + 9 * d * d + d) / 6;
}

BellIdentityResult bell_identity_check(int degree) {
    if (degree < 1 || degree > 6) throw invalid_signature_error("degree must be in 1..6");
    BellIdentityResult r;
    r.degree = degree;
    for (int m = 1; m <= degree; ++m)
        for (int mp = 1; mp <= degree; ++mp)
            r.lhs += stirling2(degree, m) * stirling2(degree, mp) * tau(m, mp);
    r.rhs = bell_number(2 * degree);
    r.ok = r.lhs == r.rhs;
    return r;
}

void OrbitSignature::validate() const {
    if (channels < 1) throw invalid_signature_error("channels must be positive");
    if (slots.empty()) throw invalid_signature_error("signature needs at least one orbit slot");
    int prev = 0;
    for (const auto& s : slots) {
        if (s.face_size <= prev)
            throw invalid_signature_error("orbit slots must have strictly ascending sizes");
        if (s.copies < 1) throw invalid_signature_error("orbit copies must be positive");
        prev = s.face_size;
    }
}

int OrbitSignature::total_copies() const {
    int total = 0;
    for (const auto& s : slots) total += s.copies;
    return total;
}

OrbitSignature signature_of(const OrbitDecomposition& d) {
    OrbitSignature sig;
    sig.channels = d.channels;
    for (const auto& part : d.parts) {
        if (!sig.slots.empty() && sig.slots.back().face_size == part.face_size)
            ++sig.slots.back().copies;
        else
            sig.slots.push_back({part.face_size, 1});
    }
    sig.validate();
    return sig;
}

std::int64_t total_parameters(const OrbitSignature& input, const OrbitSignature& output,
                              bool symmetric) {
    input.validate();
    output.validate();
    std::int64_t total = 0;
    for (const auto& si : input.slots)
        for (const auto& so : output.slots) {
            const std::int64_t t = symmetric ? tau_symmetric(si.face_size, so.face_size)
                                             : tau(si.face_size, so.face_size);
            total += static_cast<std::int64_t>(si.copies) * so.copies * t;
        }
    return total * input.channels * output.channels;
}

EquivariantMap::EquivariantMap(OrbitSignature input, OrbitSignature output)
    : input_(std::move(input)), output_(std::move(output)) {
    input_.validate();
    output_.validate();
    terms_.resize(input_.slots.size());
    for (std::size_t is = 0; is < input_.slots.size(); ++is) {
        terms_[is].resize(output_.slots.size());
        for (std::size_t os = 0; os < output_.slots.size(); ++os)
            terms_[is][os] =
                enumerate_terms(input_.slots[is].face_size, output_.slots[os].face_size);
    }
    std::int64_t off = 0;
    for (std::size_t is = 0; is < input_.slots.size(); ++is)
        for (int ic = 0; ic < input_.slots[is].copies; ++ic)
            for (std::size_t os = 0; os < output_.slots.size(); ++os)
                for (int oc = 0; oc < output_.slots[os].copies; ++oc) {
                    block_offsets_.push_back(off);
                    off += static_cast<std::int64_t>(terms_[is][os].size()) * input_.channels *
                           output_.channels;
                }
    weights_.assign(static_cast<std::size_t>(off), 0.0);
}

const std::vector<PoolBroadcastTerm>& EquivariantMap::terms(int in_slot, int out_slot) const {
    return terms_[static_cast<std::size_t>(in_slot)][static_cast<std::size_t>(out_slot)];
}

std::int64_t EquivariantMap::offset(int in_slot, int in_copy, int out_slot, int out_copy,
                                    int term_index, int in_channel, int out_channel) const {
    if (in_slot < 0 || in_slot >= static_cast<int>(input_.slots.size()))
        throw invalid_signature_error("input slot out of range");
    if (out_slot < 0 || out_slot >= static_cast<int>(output_.slots.size()))
        throw invalid_signature_error("output slot out of range");
    if (in_copy < 1 || in_copy > input_.slots[static_cast<std::size_t>(in_slot)].copies)
        throw invalid_signature_error("input copy out of range");
    if (out_copy < 1 || out_copy > output_.slots[static_cast<std::size_t>(out_slot)].copies)
        throw invalid_signature_error("output copy out of range");
    const auto& tl = terms_[static_cast<std::size_t>(in_slot)][static_cast<std::size_t>(out_slot)];
    if (term_index < 0 || term_index >= static_cast<int>(tl.size()))
        throw invalid_signature_error("term index out of range");
    if (in_channel < 0 || in_channel >= input_.channels || out_channel < 0 ||
        out_channel >= output_.channels)
        throw invalid_signature_error("channel out of range");

    // Block position among (in slot, in copy, out slot, out copy) in order.
    std::int64_t block = 0;
    for (int is = 0; is < in_slot; ++is)
        block += static_cast<std::int64_t>(input_.slots[static_cast<std::size_t>(is)].copies) *
                 output_.total_copies();
    block += static_cast<std::int64_t>(in_copy - 1) * output_.total_copies();
    for (int os = 0; os < out_slot; ++os)
        block += output_.slots[static_cast<std::size_t>(os)].copies;
    block += out_copy - 1;
    return block_offsets_[static_cast<std::size_t>(block)] +
           (static_cast<std::int64_t>(term_index) * input_.channels + in_channel) *
               output_.channels +
           out_channel;
}

double EquivariantMap::weight(int in_slot, int in_copy, int out_slot, int out_copy, int term_index,
                              int in_channel, int out_channel) const {
    return weights_[static_cast<std::size_t>(
        offset(in_slot, in_copy, out_slot, out_copy, term_index, in_channel, out_channel))];
}

double& EquivariantMap::weight(int in_slot, int in_copy, int out_slot, int out_copy,
                               int term_index, int in_channel, int out_channel) {
    return weights_[static_cast<std::size_t>(
        offset(in_slot, in_copy, out_slot, out_copy, term_index, in_channel, out_channel))];
}

std::vector<FaceVector> apply_map(const EquivariantMap& map, std::span<const FaceVector> inputs,
                                  Aggregator agg) {
    const auto& in_sig = map.input();
    const auto& out_sig = map.output();
    if (static_cast<int>(inputs.size()) != in_sig.total_copies())
        throw invalid_signature_error("input part count does not match the signature");
    if (inputs.empty()) throw invalid_signature_error("no inputs");
    const int n = inputs[0].n_nodes();
    {
        std::size_t at = 0;
        for (const auto& slot : in_sig.slots)
            for (int c = 0; c < slot.copies; ++c, ++at) {
                const auto& x = inputs[at];
                if (x.n_nodes() != n || !x.is_directed() || x.face_size() != slot.face_size ||
                    x.channels() != in_sig.channels)
                    throw invalid_signature_error("input part does not match the signature");
            }
    }

    std::vector<FaceVector> outputs;
    for (const auto& slot : out_sig.slots)
        for (int c = 0; c < slot.copies; ++c)
            outputs.emplace_back(n, slot.face_size, true, out_sig.channels);

    std::size_t gi = 0;
    for (int is = 0; is < static_cast<int>(in_sig.slots.size()); ++is)
        for (int ic = 1; ic <= in_sig.slots[static_cast<std::size_t>(is)].copies; ++ic, ++gi) {
            const auto& x = inputs[gi];
            std::size_t go = 0;
            for (int os = 0; os < static_cast<int>(out_sig.slots.size()); ++os) {
                const auto& terms = map.terms(is, os);
                std::vector<FaceVector> term_out;
                term_out.reserve(terms.size());
                for (const auto& t : terms) term_out.push_back(apply_term(x, t, agg));
                for (int oc = 1; oc <= out_sig.slots[static_cast<std::size_t>(os)].copies;
                     ++oc, ++go) {
                    auto& y = outputs[go];
                    for (int ti = 0; ti < static_cast<int>(terms.size()); ++ti) {
                        const auto& tv = term_out[static_cast<std::size_t>(ti)];
                        for (int cin = 0; cin < in_sig.channels; ++cin)
                            for (int cout = 0; cout < out_sig.channels; ++cout) {
                                const double w = map.weight(is, ic, os, oc, ti, cin, cout);
                                if (w == 0.0) continue;
                                for (std::int64_t f = 0; f < tv.size(); ++f)
                                    y.at(f, cout) += w * tv.at(f, cin);
                            }
                    }
                }
            }
        }
    return outputs;
}

EquivariantMap symmetrize_map(const EquivariantMap& map) {
    EquivariantMap out = map;
    const auto& in_sig = map.input();
    const auto& out_sig = map.output();
    for (int is = 0; is < static_cast<int>(in_sig.slots.size()); ++is)
        for (int os = 0; os < static_cast<int>(out_sig.slots.size()); ++os) {
            const auto& terms = map.terms(is, os);
            std::map<std::size_t, std::vector<int>> by_pool_size;
            for (int ti = 0; ti < static_cast<int>(terms.size()); ++ti)
                by_pool_size[terms[static_cast<std::size_t>(ti)].pooled.size()].push_back(ti);
            for (int ic = 1; ic <= in_sig.slots[static_cast<std::size_t>(is)].copies; ++ic)
                for (int oc = 1; oc <= out_sig.slots[static_cast<std::size_t>(os)].copies; ++oc)
                    for (int cin = 0; cin < in_sig.channels; ++cin)
                        for (int cout = 0; cout < out_sig.channels; ++cout)
                            for (const auto& [psize, group] : by_pool_size) {
                                double mean = 0.0;
                                for (int ti : group)
                                    mean += map.weight(is, ic, os, oc, ti, cin, cout);
                                mean /= static_cast<double>(group.size());
                                for (int ti : group)
                                    out.weight(is, ic, os, oc, ti, cin, cout) = mean;
                            }
        }
    out.set_symmetric(true);
    return out;
}

std::vector<FaceVector> apply_masked(const EquivariantMap& map, std::span<const FaceVector> inputs,
                                     std::span<const std::vector<double>> masks, Aggregator agg) {
    auto outputs = apply_map(map, inputs, agg);
    if (masks.size() != outputs.size())
        throw invalid_signature_error("one mask per output part required");
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        auto& y = outputs[i];
        if (static_cast<std::int64_t>(masks[i].size()) != y.size())
            throw invalid_signature_error("mask length does not match the output part");
        for (std::int64_t f = 0; f < y.size(); ++f)
            for (int c = 0; c < y.channels(); ++c) y.at(f, c) *= masks[i][static_cast<std::size_t>(f)];
    }
    return outputs;
}

IncidenceTensor apply_relaxed(const IncidenceTensor& t, std::span<const double> weights,
                              int out_channels, Aggregator agg) {
    const int d = static_cast<int>(t.dims().size());
    if (out_channels < 1) throw invalid_signature_error("channels must be positive");
    const std::int64_t subsets = std::int64_t{1} << d;
    if (static_cast<std::int64_t>(weights.size()) !=
        subsets * t.channels() * out_channels)
        throw invalid_signature_error("relaxed layer needs 2^D weights per channel pair");

    IncidenceTensor out(t.n_nodes(), t.dims(), ConstraintSet{}, out_channels);
    const auto& counts = t.dim_face_counts();

    for (std::int64_t s = 0; s < subsets; ++s) {
        std::vector<std::int64_t> reduced_counts(counts.begin(), counts.end());
        std::int64_t pooled_entries = 1;
        for (int dd = 0; dd < d; ++dd)
            if (s >> dd & 1) {
                pooled_entries *= counts[static_cast<std::size_t>(dd)];
                reduced_counts[static_cast<std::size_t>(dd)] = 1;
            }
        std::int64_t reduced_total = 1;
        for (auto c : reduced_counts) reduced_total *= c;

        const bool use_max = agg == Aggregator::max;
        std::vector<double> reduced(static_cast<std::size_t>(reduced_total * t.channels()),
                                    use_max ? -std::numeric_limits<double>::infinity() : 0.0);
        auto reduced_offset = [&](std::span<const std::int64_t> idx) {
            std::int64_t off = 0;
            for (int dd = 0; dd < d; ++dd) {
                const std::int64_t i = (s >> dd & 1) ? 0 : idx[static_cast<std::size_t>(dd)];
                off = off * reduced_counts[static_cast<std::size_t>(dd)] + i;
            }
            return off;
        };

        detail::for_each_entry(counts, [&](std::span<const std::int64_t> idx) {
            const std::int64_t ro = reduced_offset(idx);
            for (int c = 0; c < t.channels(); ++c) {
                double& slot = reduced[static_cast<std::size_t>(ro * t.channels() + c)];
                const double v = t.value(idx, c);
                slot = use_max ? std::max(slot, v) : slot + v;
            }
        });
        if (agg == Aggregator::mean)
            for (double& v : reduced) v /= static_cast<double>(pooled_entries);

        detail::for_each_entry(counts, [&](std::span<const std::int64_t> idx) {
            const std::int64_t ro = reduced_offset(idx);
            for (int cin = 0; cin < t.channels(); ++cin) {
                const double v = reduced[static_cast<std::size_t>(ro * t.channels() + cin)];
                for (int cout = 0; cout < out_channels; ++cout) {
                    const double w = weights[static_cast<std::size_t>(
                        (s * t.channels() + cin) * out_channels + cout)];
                    if (w != 0.0) out.value(idx, cout) += w * v;
                }
            }
        });
    }
    return out;
}

} // namespace incnet
