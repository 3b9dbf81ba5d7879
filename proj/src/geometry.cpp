#include "incnet/geometry.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace incnet::geometry {

const std::vector<Face> SimplicialComplex::empty_{};

SimplicialComplex::SimplicialComplex(int n_nodes, std::vector<Face> faces) : n_nodes_(n_nodes) {
    if (n_nodes < 1) throw invalid_face_error("a complex needs at least one node");
    directed_ = !faces.empty() && faces.front().is_directed();
    for (const auto& f : faces) {
        if (f.is_directed() != directed_)
            throw invalid_face_error("faces of a complex must share directedness");
        for (NodeId v : f.nodes())
            if (v < 1 || v > n_nodes) throw invalid_face_error("face node out of range");
        by_size_[f.size()].push_back(f);
    }
    for (auto& [size, list] : by_size_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

std::vector<std::pair<int, std::int64_t>> SimplicialComplex::size_counts() const {
    std::vector<std::pair<int, std::int64_t>> out;
    for (const auto& [size, list] : by_size_)
        out.emplace_back(size, static_cast<std::int64_t>(list.size()));
    return out;
}

const std::vector<Face>& SimplicialComplex::faces(int size) const {
    auto it = by_size_.find(size);
    return it == by_size_.end() ? empty_ : it->second;
}

bool SimplicialComplex::contains(const Face& f) const {
    const auto& list = faces(f.size());
    return std::binary_search(list.begin(), list.end(), f);
}

int SimplicialComplex::max_size() const {
    return by_size_.empty() ? 0 : by_size_.rbegin()->first;
}

SimplicialComplex closure(const std::vector<Face>& facets, int n_nodes) {
    const bool directed = !facets.empty() && facets.front().is_directed();
    std::set<Face> all;
    for (const auto& facet : facets) {
        if (facet.is_directed() != directed)
            throw invalid_face_error("facets must share directedness");
        const auto nodes = facet.nodes();
        const std::size_t m = nodes.size();
        // Nonempty subsets; keeping the relative order makes each one a
        // subsequence, which is the directed notion of a subface.
        for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << m); ++bits) {
            std::vector<NodeId> sub;
            for (std::size_t i = 0; i < m; ++i)
                if (bits >> i & 1) sub.push_back(nodes[i]);
            all.insert(Face(std::move(sub), directed));
        }
    }
    return SimplicialComplex(n_nodes, {all.begin(), all.end()});
}

IncidenceResult incidence_from_complex(const SimplicialComplex& c, int rows_size, int cols_size,
                                       int shared_size) {
    if (c.is_directed())
        throw invalid_signature_error("incidence tensors are built from undirected complexes");
    if (rows_size < 1 || cols_size < rows_size || cols_size > c.n_nodes())
        throw invalid_signature_error("need 1 <= rows_size <= cols_size <= n_nodes");
    if (rows_size == cols_size) {
        if (shared_size == -1) shared_size = rows_size - 1;
        if (shared_size < 1 || shared_size >= rows_size)
            throw invalid_signature_error("shared subface size must be in 1..rows_size-1");
    } else if (shared_size != -1) {
        throw invalid_signature_error("shared subface size only applies to equal sizes");
    }

    const auto& rows = c.faces(rows_size);
    const auto& cols = c.faces(cols_size);
    std::vector<std::vector<Face>> present{rows, cols};
    auto densified = densify(present, c.n_nodes(),
                             {{rows_size, false}, {cols_size, false}});

    auto incident = [&](const Face& a, const Face& b) {
        if (rows_size < cols_size)
            return std::includes(b.nodes().begin(), b.nodes().end(), a.nodes().begin(),
                                 a.nodes().end());
        std::vector<NodeId> common;
        std::set_intersection(a.nodes().begin(), a.nodes().end(), b.nodes().begin(),
                              b.nodes().end(), std::back_inserter(common));
        return static_cast<int>(common.size()) >= shared_size;
    };

    for (const auto& a : rows)
        for (const auto& b : cols) {
            if (incident(a, b)) continue;
            const std::int64_t idx[] = {face_to_index(a, c.n_nodes()),
                                        face_to_index(b, c.n_nodes())};
            const auto off = densified.tensor.entry_offset(idx);
            densified.mask[static_cast<std::size_t>(off)] = 0.0;
            densified.tensor.value(idx, 0) = 0.0;
        }
    return {std::move(densified.tensor), std::move(densified.mask)};
}

GradedPoset::GradedPoset(std::vector<PosetElement> elements,
                         std::vector<std::pair<int, int>> covers)
    : elements_(std::move(elements)), covers_(std::move(covers)) {
    for (auto& e : elements_) std::sort(e.nodes.begin(), e.nodes.end());
    for (std::size_t i = 0; i < elements_.size(); ++i)
        index_.try_emplace(elements_[i].id, static_cast<int>(i));

    const std::size_t n = elements_.size();
    reachable_.assign(n, std::vector<bool>(n, false));
    for (const auto& [lo, hi] : covers_) {
        auto a = index_.find(lo);
        auto b = index_.find(hi);
        if (a != index_.end() && b != index_.end())
            reachable_[static_cast<std::size_t>(a->second)][static_cast<std::size_t>(b->second)] =
                true;
    }
    // Transitive closure (Warshall); the poset sizes here are small.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reachable_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reachable_[k][j]) reachable_[i][j] = true;
}

std::vector<int> GradedPoset::ranks() const {
    std::set<int> seen;
    for (const auto& e : elements_) seen.insert(e.rank);
    return {seen.begin(), seen.end()};
}

std::vector<const PosetElement*> GradedPoset::at_rank(int rank) const {
    std::vector<const PosetElement*> out;
    for (const auto& e : elements_)
        if (e.rank == rank) out.push_back(&e);
    return out;
}

bool GradedPoset::has_element(int id) const { return index_.contains(id); }

const PosetElement& GradedPoset::element(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw invalid_face_error("unknown poset element id");
    return elements_[static_cast<std::size_t>(it->second)];
}

bool GradedPoset::less(int id_a, int id_b) const {
    auto a = index_.find(id_a);
    auto b = index_.find(id_b);
    if (a == index_.end() || b == index_.end())
        throw invalid_face_error("unknown poset element id");
    return reachable_[static_cast<std::size_t>(a->second)][static_cast<std::size_t>(b->second)];
}

PosetValidation validate_poset(const GradedPoset& p) {
    PosetValidation r;
    const auto& elems = p.elements();

    std::set<int> ids;
    for (const auto& e : elems)
        if (!ids.insert(e.id).second)
            r.violations.push_back(
                {"duplicate-id", "element id " + std::to_string(e.id) + " appears twice"});
    for (const auto& [lo, hi] : p.covers())
        if (!p.has_element(lo) || !p.has_element(hi))
            r.violations.push_back({"unknown-id", "cover (" + std::to_string(lo) + ", " +
                                                      std::to_string(hi) +
                                                      ") references a missing element"});
    if (!r.violations.empty()) {
        r.valid = false;
        return r;
    }

    bool cyclic = false;
    for (const auto& e : elems)
        if (p.less(e.id, e.id)) {
            r.violations.push_back(
                {"cycle", "element " + std::to_string(e.id) + " is below itself"});
            cyclic = true;
        }
    if (!cyclic) {
        for (const auto& a : elems)
            for (const auto& b : elems)
                if (p.less(a.id, b.id) && a.rank >= b.rank)
                    r.violations.push_back(
                        {"rank-monotonicity", "element " + std::to_string(a.id) + " (rank " +
                                                  std::to_string(a.rank) + ") is below " +
                                                  std::to_string(b.id) + " (rank " +
                                                  std::to_string(b.rank) + ")"});
        // A covering pair: a < b with nothing strictly between.
        for (const auto& a : elems)
            for (const auto& b : elems) {
                if (!p.less(a.id, b.id)) continue;
                bool between = false;
                for (const auto& z : elems)
                    if (p.less(a.id, z.id) && p.less(z.id, b.id)) {
                        between = true;
                        break;
                    }
                if (!between && b.rank != a.rank + 1)
                    r.violations.push_back(
                        {"covering-rank", "covering pair (" + std::to_string(a.id) + ", " +
                                              std::to_string(b.id) + ") spans ranks " +
                                              std::to_string(a.rank) + " and " +
                                              std::to_string(b.rank)});
            }
    }
    r.valid = r.violations.empty();
    return r;
}

IncidenceResult incidence_from_poset(const GradedPoset& p, int rank_a, int rank_b) {
    const auto ea = p.at_rank(rank_a);
    const auto eb = p.at_rank(rank_b);
    if (ea.empty() || eb.empty())
        throw invalid_signature_error("both ranks need at least one element");

    auto label_size = [](const std::vector<const PosetElement*>& es, int rank) {
        const int size = static_cast<int>(es.front()->nodes.size());
        for (const auto* e : es)
            if (static_cast<int>(e->nodes.size()) != size)
                throw unsupported_irregular_error("rank " + std::to_string(rank) +
                                                  " mixes node-set sizes");
        if (size < 1)
            throw unsupported_irregular_error("rank " + std::to_string(rank) +
                                              " has an empty node-set label");
        return size;
    };
    const int size_a = label_size(ea, rank_a);
    const int size_b = label_size(eb, rank_b);

    int n = 0;
    for (const auto& e : p.elements())
        for (NodeId v : e.nodes) n = std::max(n, v);
    if (n < 1) throw unsupported_irregular_error("poset carries no node labels");

    auto face_of = [](const PosetElement& e) { return Face::undirected(e.nodes); };
    std::vector<std::vector<Face>> present(2);
    for (const auto* e : ea) present[0].push_back(face_of(*e));
    for (const auto* e : eb) present[1].push_back(face_of(*e));

    auto densified = densify(present, n, {{size_a, false}, {size_b, false}});
    // densify marks every (present, present) pair; keep only related ones.
    for (const auto* a : ea)
        for (const auto* b : eb) {
            if (p.less(a->id, b->id) || p.less(b->id, a->id)) continue;
            const std::int64_t idx[] = {face_to_index(face_of(*a), n),
                                        face_to_index(face_of(*b), n)};
            const auto off = densified.tensor.entry_offset(idx);
            densified.mask[static_cast<std::size_t>(off)] = 0.0;
            densified.tensor.value(idx, 0) = 0.0;
        }
    return {std::move(densified.tensor), std::move(densified.mask)};
}

} // namespace incnet::geometry
