#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "incnet/equimap.hpp"
#include "incnet/geometry.hpp"
#include "incnet/tensors.hpp"

namespace incnet {

using Json = nlohmann::ordered_json;

// Tensor files:
// { "n_nodes": N, "dims": [{"face_size": M, "directed": bool}, ...],
//   "constraints": [[[d, i], [d', i']], ...], "channels": C,
//   "entries": [{"faces": [[...], ...], "value": [c floats]}, ...] }
// Entries omitted are zero; node ids and (d, i) references are 1-based.
Json tensor_to_json(const IncidenceTensor& t);
IncidenceTensor tensor_from_json(const Json& j);

// Layer files:
// { "input": {"orbits": [{"m": ..., "copies": ...}], "channels": ...},
//   "output": {...}, "symmetric": bool,
//   "weights": {"k,m->k',m'": {"P={...};B=(...)": [[w]]}} }
// Weight matrices are [in_channel][out_channel]; absent blocks/terms are zero.
Json map_to_json(const EquivariantMap& map);
EquivariantMap map_from_json(const Json& j);

// { "n_nodes": N, "facets": [[...], ...], "directed": bool (optional) }
geometry::SimplicialComplex complex_from_json(const Json& j);

// { "elements": [{"id": ..., "nodes": [...], "rank": ...}], "covers": [[a, b], ...] }
geometry::GradedPoset poset_from_json(const Json& j);

Json incidence_to_json(const geometry::IncidenceResult& r);

Json decomposition_to_json(const OrbitDecomposition& d);

// Mask files reuse the tensor format with one channel and {0,1} values;
// returns the entry-grid mask and checks dims match the given tensor.
std::vector<double> mask_from_json(const Json& j, const IncidenceTensor& like);

Json load_json_file(const std::string& path);

} // namespace incnet
