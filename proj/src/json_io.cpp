#include "incnet/json_io.hpp"

#include <fstream>
#include <sstream>

namespace incnet {

namespace {

std::vector<std::int64_t> parse_entry_faces(const Json& faces, const IncidenceTensor& t) {
    if (!faces.is_array() || faces.size() != t.dims().size())
        throw invalid_face_error("entry needs one face per dimension");
    std::vector<std::int64_t> idx;
    for (std::size_t d = 0; d < t.dims().size(); ++d) {
        const auto& spec = t.dims()[d];
        std::vector<NodeId> nodes = faces[d].get<std::vector<NodeId>>();
        Face f(std::move(nodes), spec.directed);
        if (f.size() != spec.face_size) throw invalid_face_error("face size mismatch in entry");
        for (NodeId v : f.nodes())
            if (v > t.n_nodes()) throw invalid_face_error("entry node out of range");
        idx.push_back(face_to_index(f, t.n_nodes()));
    }
    return idx;
}

Json signature_to_json(const OrbitSignature& sig) {
    Json j;
    j["orbits"] = Json::array();
    for (const auto& s : sig.slots) j["orbits"].push_back({{"m", s.face_size}, {"copies", s.copies}});
    j["channels"] = sig.channels;
    return j;
}

OrbitSignature signature_from_json(const Json& j) {
    OrbitSignature sig;
    for (const auto& s : j.at("orbits"))
        sig.slots.push_back({s.at("m").get<int>(), s.at("copies").get<int>()});
    sig.channels = j.value("channels", 1);
    sig.validate();
    return sig;
}

std::pair<int, int> parse_block_side(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw invalid_signature_error("malformed weight block key: " + s);
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

} // namespace

Json tensor_to_json(const IncidenceTensor& t) {
    Json j;
    j["n_nodes"] = t.n_nodes();
    j["dims"] = Json::array();
    for (const auto& d : t.dims())
        j["dims"].push_back({{"face_size", d.face_size}, {"directed", d.directed}});
    j["constraints"] = Json::array();
    for (const auto& g : t.constraints().groups()) {
        Json group = Json::array();
        for (const auto& p : g) group.push_back({p.dim, p.pos});
        j["constraints"].push_back(group);
    }
    j["channels"] = t.channels();
    j["entries"] = Json::array();

    std::vector<NodeId> buf;
    detail::for_each_entry(t.dim_face_counts(), [&](std::span<const std::int64_t> idx) {
        bool nonzero = false;
        for (int c = 0; c < t.channels(); ++c)
            if (t.value(idx, c) != 0.0) {
                nonzero = true;
                break;
            }
        if (!nonzero) return;
        Json entry;
        entry["faces"] = Json::array();
        for (std::size_t d = 0; d < t.dims().size(); ++d) {
            const auto& spec = t.dims()[d];
            buf.resize(static_cast<std::size_t>(spec.face_size));
            detail::index_to_tuple(idx[d], t.n_nodes(), spec.face_size, spec.directed, buf);
            entry["faces"].push_back(buf);
        }
        entry["value"] = Json::array();
        for (int c = 0; c < t.channels(); ++c) entry["value"].push_back(t.value(idx, c));
        j["entries"].push_back(std::move(entry));
    });
    return j;
}

IncidenceTensor tensor_from_json(const Json& j) {
    const int n = j.at("n_nodes").get<int>();
    std::vector<DimSpec> dims;
    for (const auto& d : j.at("dims"))
        dims.push_back({d.at("face_size").get<int>(), d.value("directed", true)});
    std::vector<std::vector<PositionRef>> groups;
    for (const auto& g : j.value("constraints", Json::array())) {
        std::vector<PositionRef> group;
        for (const auto& p : g) group.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
        groups.push_back(std::move(group));
    }
    const int channels = j.value("channels", 1);
    IncidenceTensor t(n, std::move(dims), ConstraintSet(std::move(groups)), channels);

    for (const auto& e : j.value("entries", Json::array())) {
        const auto idx = parse_entry_faces(e.at("faces"), t);
        const auto& val = e.at("value");
        if (val.is_array()) {
            if (static_cast<int>(val.size()) != channels)
                throw invalid_face_error("entry value needs one number per channel");
            for (int c = 0; c < channels; ++c) t.value(idx, c) = val[static_cast<std::size_t>(c)].get<double>();
        } else {
            if (channels != 1) throw invalid_face_error("scalar entry value on a multichannel tensor");
            t.value(idx, 0) = val.get<double>();
        }
    }
    return t;
}

Json map_to_json(const EquivariantMap& map) {
    Json j;
    j["input"] = signature_to_json(map.input());
    j["output"] = signature_to_json(map.output());
    j["symmetric"] = map.symmetric();
    Json weights = Json::object();
    const auto& in_sig = map.input();
    const auto& out_sig = map.output();
    for (int is = 0; is < static_cast<int>(in_sig.slots.size()); ++is)
        for (int ic = 1; ic <= in_sig.slots[static_cast<std::size_t>(is)].copies; ++ic)
            for (int os = 0; os < static_cast<int>(out_sig.slots.size()); ++os)
                for (int oc = 1; oc <= out_sig.slots[static_cast<std::size_t>(os)].copies; ++oc) {
                    std::ostringstream key;
                    key << ic << ',' << in_sig.slots[static_cast<std::size_t>(is)].face_size
                        << "->" << oc << ','
                        << out_sig.slots[static_cast<std::size_t>(os)].face_size;
                    Json block = Json::object();
                    const auto& terms = map.terms(is, os);
                    for (int ti = 0; ti < static_cast<int>(terms.size()); ++ti) {
                        Json m = Json::array();
                        for (int cin = 0; cin < in_sig.channels; ++cin) {
                            Json row = Json::array();
                            for (int cout = 0; cout < out_sig.channels; ++cout)
                                row.push_back(map.weight(is, ic, os, oc, ti, cin, cout));
                            m.push_back(std::move(row));
                        }
                        block[terms[static_cast<std::size_t>(ti)].id()] = std::move(m);
                    }
                    weights[key.str()] = std::move(block);
                }
    j["weights"] = std::move(weights);
    return j;
}

EquivariantMap map_from_json(const Json& j) {
    EquivariantMap map(signature_from_json(j.at("input")), signature_from_json(j.at("output")));
    map.set_symmetric(j.value("symmetric", false));

    const auto& in_sig = map.input();
    const auto& out_sig = map.output();
    auto slot_of = [](const OrbitSignature& sig, int m) {
        for (std::size_t s = 0; s < sig.slots.size(); ++s)
            if (sig.slots[s].face_size == m) return static_cast<int>(s);
        throw invalid_signature_error("weight block size " + std::to_string(m) +
                                      " is not in the signature");
    };

    const Json weight_blocks = j.value("weights", Json::object());
    for (const auto& [key, block] : weight_blocks.items()) {
        const auto arrow = key.find("->");
        if (arrow == std::string::npos)
            throw invalid_signature_error("malformed weight block key: " + key);
        const auto [ic, m_in] = parse_block_side(key.substr(0, arrow));
        const auto [oc, m_out] = parse_block_side(key.substr(arrow + 2));
        const int is = slot_of(in_sig, m_in);
        const int os = slot_of(out_sig, m_out);
        const auto& terms = map.terms(is, os);
        for (const auto& [term_id, matrix] : block.items()) {
            const auto term = parse_term_id(term_id, m_in, m_out);
            int ti = -1;
            for (std::size_t t = 0; t < terms.size(); ++t)
                if (terms[t] == term) {
                    ti = static_cast<int>(t);
                    break;
                }
            if (ti < 0) throw invalid_signature_error("unknown term id: " + term_id);
            if (!matrix.is_array() || static_cast<int>(matrix.size()) != in_sig.channels)
                throw invalid_signature_error("weight matrix must be [in_channel][out_channel]");
            for (int cin = 0; cin < in_sig.channels; ++cin) {
                const auto& row = matrix[static_cast<std::size_t>(cin)];
                if (!row.is_array() || static_cast<int>(row.size()) != out_sig.channels)
                    throw invalid_signature_error("weight matrix must be [in_channel][out_channel]");
                for (int cout = 0; cout < out_sig.channels; ++cout)
                    map.weight(is, ic, os, oc, ti, cin, cout) =
                        row[static_cast<std::size_t>(cout)].get<double>();
            }
        }
    }
    return map;
}

geometry::SimplicialComplex complex_from_json(const Json& j) {
    const int n = j.at("n_nodes").get<int>();
    const bool directed = j.value("directed", false);
    std::vector<Face> facets;
    for (const auto& f : j.at("facets"))
        facets.emplace_back(f.get<std::vector<NodeId>>(), directed);
    return geometry::closure(facets, n);
}

geometry::GradedPoset poset_from_json(const Json& j) {
    std::vector<geometry::PosetElement> elements;
    for (const auto& e : j.at("elements"))
        elements.push_back({e.at("id").get<int>(), e.at("nodes").get<std::vector<NodeId>>(),
                            e.at("rank").get<int>()});
    std::vector<std::pair<int, int>> covers;
    for (const auto& c : j.value("covers", Json::array()))
        covers.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
    return geometry::GradedPoset(std::move(elements), std::move(covers));
}

Json incidence_to_json(const geometry::IncidenceResult& r) {
    Json j;
    j["tensor"] = tensor_to_json(r.tensor);
    std::int64_t ones = 0;
    for (double v : r.mask)
        if (v != 0.0) ++ones;
    j["mask_ones"] = ones;
    return j;
}

Json decomposition_to_json(const OrbitDecomposition& d) {
    Json j;
    j["n_nodes"] = d.n_nodes;
    j["dims"] = Json::array();
    for (const auto& spec : d.dims)
        j["dims"].push_back({{"face_size", spec.face_size}, {"directed", spec.directed}});
    j["constraints"] = Json::array();
    for (const auto& g : d.constraints.groups()) {
        Json group = Json::array();
        for (const auto& p : g) group.push_back({p.dim, p.pos});
        j["constraints"].push_back(group);
    }
    j["channels"] = d.channels;
    j["parts"] = Json::array();
    for (const auto& part : d.parts) {
        Json p;
        p["m"] = part.face_size;
        p["copy"] = part.copy;
        p["partition"] = Json::array();
        for (const auto& block : part.partition.blocks()) {
            Json b = Json::array();
            for (const auto& pos : block) b.push_back({pos.dim, pos.pos});
            p["partition"].push_back(b);
        }
        p["values"] = Json::array();
        for (std::int64_t f = 0; f < part.values.size(); ++f) {
            Json row = Json::array();
            for (int c = 0; c < part.values.channels(); ++c) row.push_back(part.values.at(f, c));
            p["values"].push_back(std::move(row));
        }
        j["parts"].push_back(std::move(p));
    }
    return j;
}

std::vector<double> mask_from_json(const Json& j, const IncidenceTensor& like) {
    const auto m = tensor_from_json(j);
    if (m.n_nodes() != like.n_nodes() || m.dims() != like.dims())
        throw invalid_face_error("mask shape does not match the tensor");
    if (m.channels() != 1) throw invalid_face_error("masks carry one channel");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.entry_count()));
    for (double v : m.values()) {
        if (v != 0.0 && v != 1.0) throw invalid_face_error("mask values must be 0 or 1");
        out.push_back(v);
    }
    return out;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);
}

} // namespace incnet
