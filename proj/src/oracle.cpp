#include "incnet/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "incnet/combinatorics.hpp"

namespace incnet::oracle {

namespace {

std::vector<std::vector<NodeId>> all_face_tuples(int n, int size) {
    std::vector<std::vector<NodeId>> out;
    detail::for_each_face_tuple(n, size, true, [&](std::span<const NodeId> t) {
        out.emplace_back(t.begin(), t.end());
    });
    return out;
}

bool pattern_matches(const OrbitPattern& p, std::span<const NodeId> out_face,
                     std::span<const NodeId> in_face) {
    return pair_pattern(out_face, in_face) == p;
}

} // namespace

OrbitPattern pair_pattern(std::span<const NodeId> out_face, std::span<const NodeId> in_face) {
    OrbitPattern p;
    p.input_size = static_cast<int>(in_face.size());
    p.output_size = static_cast<int>(out_face.size());
    for (std::size_t i = 0; i < in_face.size(); ++i)
        for (std::size_t o = 0; o < out_face.size(); ++o)
            if (in_face[i] == out_face[o]) {
                p.matches.emplace_back(static_cast<int>(i) + 1, static_cast<int>(o) + 1);
                break;
            }
    return p;
}

std::vector<Orbit> enumerate_orbits_bruteforce(int input_size, int output_size, int n_nodes,
                                               bool require_resolved, int samples,
                                               std::uint64_t seed) {
    if (input_size < 1 || output_size < 1 || n_nodes < 1)
        throw invalid_signature_error("face sizes and node count must be positive");
    if (require_resolved && n_nodes < input_size + output_size)
        throw under_resolved_orbits_error(
            "orbits under-resolved: need n_nodes >= input_size + output_size");

    const auto ins = all_face_tuples(n_nodes, input_size);
    const auto outs = all_face_tuples(n_nodes, output_size);

    std::map<OrbitPattern, std::vector<std::pair<std::int64_t, std::int64_t>>> grouped;
    for (std::int64_t o = 0; o < static_cast<std::int64_t>(outs.size()); ++o)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(ins.size()); ++i)
            grouped[pair_pattern(outs[static_cast<std::size_t>(o)],
                                 ins[static_cast<std::size_t>(i)])]
                .emplace_back(o, i);

    // Closure under the diagonal node action: the equality pattern of a pair
    // must be invariant under relabeling.
    std::vector<Permutation> perms;
    std::vector<NodeId> base(static_cast<std::size_t>(n_nodes));
    std::iota(base.begin(), base.end(), 1);
    if (n_nodes <= 5) {
        std::vector<NodeId> img = base;
        do perms.emplace_back(img);
        while (std::next_permutation(img.begin(), img.end()));
    } else {
        std::mt19937_64 rng(seed);
        for (int s = 0; s < samples; ++s) {
            std::vector<NodeId> img = base;
            std::shuffle(img.begin(), img.end(), rng);
            perms.emplace_back(img);
        }
    }
    std::vector<NodeId> pi(static_cast<std::size_t>(input_size));
    std::vector<NodeId> po(static_cast<std::size_t>(output_size));
    for (const auto& [pattern, members] : grouped)
        for (const auto& [oi, ii] : members) {
            const auto& of = outs[static_cast<std::size_t>(oi)];
            const auto& inf = ins[static_cast<std::size_t>(ii)];
            for (const auto& p : perms) {
                for (int k = 0; k < input_size; ++k)
                    pi[static_cast<std::size_t>(k)] = p(inf[static_cast<std::size_t>(k)]);
                for (int k = 0; k < output_size; ++k)
                    po[static_cast<std::size_t>(k)] = p(of[static_cast<std::size_t>(k)]);
                if (!pattern_matches(pattern, po, pi))
                    throw under_resolved_orbits_error("pattern grouping not permutation-closed");
            }
        }

    // Canonical order: the enumerate_terms order via the term/orbit bijection.
    std::vector<Orbit> orbits;
    for (const auto& term : enumerate_terms(input_size, output_size)) {
        auto it = grouped.find(term_pattern(term));
        if (it == grouped.end()) continue;
        orbits.push_back({it->first, std::move(it->second)});
        grouped.erase(it);
    }
    if (!grouped.empty())
        throw under_resolved_orbits_error("found a pattern outside the term bijection");
    return orbits;
}

PoolBroadcastTerm orbit_to_term(const OrbitPattern& pattern) {
    PoolBroadcastTerm t{pattern.input_size, pattern.output_size, {}, {}};
    std::vector<int> matched_in(static_cast<std::size_t>(pattern.input_size) + 1, 0);
    for (const auto& [i, o] : pattern.matches) matched_in[static_cast<std::size_t>(i)] = o;
    for (int i = 1; i <= pattern.input_size; ++i) {
        if (matched_in[static_cast<std::size_t>(i)] == 0)
            t.pooled.push_back(i);
        else
            t.placement.push_back(matched_in[static_cast<std::size_t>(i)]);
    }
    return t;
}

OrbitPattern term_pattern(const PoolBroadcastTerm& term) {
    OrbitPattern p{term.input_size, term.output_size, {}};
    std::size_t k = 0;
    for (int i = 1; i <= term.input_size; ++i) {
        if (std::binary_search(term.pooled.begin(), term.pooled.end(), i)) continue;
        p.matches.emplace_back(i, term.placement[k++]);
    }
    return p;
}

DenseMatrix term_to_denseW(const PoolBroadcastTerm& term, int n_nodes) {
    const auto ins = all_face_tuples(n_nodes, term.input_size);
    const auto outs = all_face_tuples(n_nodes, term.output_size);
    const auto pattern = term_pattern(term);
    DenseMatrix w{static_cast<std::int64_t>(outs.size()), static_cast<std::int64_t>(ins.size()),
                  {}};
    w.data.assign(static_cast<std::size_t>(w.rows * w.cols), 0);
    for (std::int64_t r = 0; r < w.rows; ++r)
        for (std::int64_t c = 0; c < w.cols; ++c) {
            bool hit = true;
            for (const auto& [i, o] : pattern.matches)
                if (ins[static_cast<std::size_t>(c)][static_cast<std::size_t>(i - 1)] !=
                    outs[static_cast<std::size_t>(r)][static_cast<std::size_t>(o - 1)]) {
                    hit = false;
                    break;
                }
            // With sum pooling every completion contributes once, so the
            // matrix is 0/1: agree on the matched pairs and the rest is free.
            if (hit) w.at(r, c) = 1;
        }
    return w;
}

DenseMatrix orbit_indicator(const OrbitPattern& pattern, int n_nodes) {
    const auto ins = all_face_tuples(n_nodes, pattern.input_size);
    const auto outs = all_face_tuples(n_nodes, pattern.output_size);
    DenseMatrix w{static_cast<std::int64_t>(outs.size()), static_cast<std::int64_t>(ins.size()),
                  {}};
    w.data.assign(static_cast<std::size_t>(w.rows * w.cols), 0);
    for (std::int64_t r = 0; r < w.rows; ++r)
        for (std::int64_t c = 0; c < w.cols; ++c)
            if (pattern_matches(pattern, outs[static_cast<std::size_t>(r)],
                                ins[static_cast<std::size_t>(c)]))
                w.at(r, c) = 1;
    return w;
}

FaceVector oracle_apply(std::span<const double> weights, const std::vector<Orbit>& orbits,
                        const FaceVector& x) {
    if (orbits.empty()) throw invalid_signature_error("no orbits given");
    if (weights.size() != orbits.size())
        throw invalid_signature_error("one weight per orbit required");
    const auto& shape = orbits.front().pattern;
    if (!x.is_directed() || x.face_size() != shape.input_size)
        throw invalid_signature_error("input does not match the orbit shapes");
    FaceVector y(x.n_nodes(), shape.output_size, true, x.channels());
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        const double w = weights[k];
        if (w == 0.0) continue;
        for (const auto& [o, i] : orbits[k].members)
            for (int c = 0; c < x.channels(); ++c) y.at(o, c) += w * x.at(i, c);
    }
    return y;
}

std::vector<double> orbit_weights_from_term_weights(std::span<const double> term_weights,
                                                    const std::vector<PoolBroadcastTerm>& terms,
                                                    const std::vector<Orbit>& orbits) {
    if (term_weights.size() != terms.size())
        throw invalid_signature_error("one weight per term required");
    std::vector<double> out(orbits.size(), 0.0);
    for (std::size_t k = 0; k < orbits.size(); ++k)
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto tp = term_pattern(terms[t]);
            // The orbit collects the weight of every term whose matching is a
            // subset of the orbit's pattern.
            if (std::includes(orbits[k].pattern.matches.begin(), orbits[k].pattern.matches.end(),
                              tp.matches.begin(), tp.matches.end()))
                out[k] += term_weights[t];
        }
    return out;
}

std::int64_t stirling(int n, int k) {
    if (n < 0 || n > 12) throw std::range_error("stirling: n out of 0..12");
    if (k < 0 || k > n) return 0;
    if (n == 0) return k == 0 ? 1 : 0;
    std::vector<std::int64_t> row{1}; // S(0, .)
    for (int nn = 1; nn <= n; ++nn) {
        std::vector<std::int64_t> next(static_cast<std::size_t>(nn) + 1, 0);
        for (int kk = 1; kk <= nn; ++kk)
            next[static_cast<std::size_t>(kk)] =
                kk * (kk < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(kk)] : 0) +
                row[static_cast<std::size_t>(kk - 1)];
        row = std::move(next);
    }
    return row[static_cast<std::size_t>(k)];
}

std::int64_t bell(int n) {
    if (n < 0 || n > 12) throw std::range_error("bell: n out of 0..12");
    std::int64_t total = 0;
    for (int k = 0; k <= n; ++k) total += stirling(n, k);
    return total;
}

OrbitCountCase check_orbit_count(int input_size, int output_size, int n_nodes) {
    OrbitCountCase r;
    r.input_size = input_size;
    r.output_size = output_size;
    r.n_nodes = n_nodes;
    r.expected_undercount = n_nodes < input_size + output_size;
    const auto orbits = enumerate_orbits_bruteforce(input_size, output_size, n_nodes, false);
    r.orbit_count = static_cast<std::int64_t>(orbits.size());
    r.tau = tau(input_size, output_size);
    r.match = r.expected_undercount ? r.orbit_count < r.tau : r.orbit_count == r.tau;
    return r;
}

EquivalenceCase check_map_equivalence(int input_size, int output_size, int n_nodes, int cases,
                                      std::uint64_t seed) {
    EquivalenceCase r;
    r.input_size = input_size;
    r.output_size = output_size;
    r.n_nodes = n_nodes;
    r.cases = cases;

    const auto terms = enumerate_terms(input_size, output_size);
    const auto orbits = enumerate_orbits_bruteforce(input_size, output_size, n_nodes);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> val(-9, 9);

    OrbitSignature in_sig{{{input_size, 1}}, 1};
    OrbitSignature out_sig{{{output_size, 1}}, 1};

    r.match = true;
    for (int k = 0; k < cases; ++k) {
        std::vector<double> tw(terms.size());
        for (double& w : tw) w = val(rng);

        FaceVector x(n_nodes, input_size, true, 1);
        for (double& v : x.values()) v = val(rng);

        EquivariantMap map(in_sig, out_sig);
        for (std::size_t t = 0; t < terms.size(); ++t)
            map.weight(0, 1, 0, 1, static_cast<int>(t), 0, 0) = tw[t];
        const auto y_map = apply_map(map, std::span(&x, 1))[0];

        const auto ow = orbit_weights_from_term_weights(tw, terms, orbits);
        const auto y_orbit = oracle_apply(ow, orbits, x);

        FaceVector y_dense(n_nodes, output_size, true, 1);
        for (std::size_t t = 0; t < terms.size(); ++t) {
            if (tw[t] == 0.0) continue;
            const auto w = term_to_denseW(terms[t], n_nodes);
            for (std::int64_t row = 0; row < w.rows; ++row)
                for (std::int64_t col = 0; col < w.cols; ++col)
                    if (w.at(row, col))
                        y_dense.at(row, 0) += tw[t] * x.at(col, 0);
        }

        for (std::int64_t f = 0; f < y_map.size(); ++f) {
            const double a = std::abs(y_map.at(f, 0) - y_orbit.at(f, 0));
            const double b = std::abs(y_map.at(f, 0) - y_dense.at(f, 0));
            r.max_abs_diff = std::max({r.max_abs_diff, a, b});
        }
        if (r.max_abs_diff != 0.0) r.match = false;
    }
    return r;
}

} // namespace incnet::oracle
