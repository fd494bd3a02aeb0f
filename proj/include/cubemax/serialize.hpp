#ifndef CUBEMAX_SERIALIZE_HPP
#define CUBEMAX_SERIALIZE_HPP

#include <string>

#include "json.hpp"

#include "cubemax/cube.hpp"
#include "cubemax/estimates.hpp"
#include "cubemax/sparse.hpp"

namespace cubemax {

using Json = nlohmann::ordered_json;

/// Serializes with every double printed by %.17g. Non-finite doubles become
/// the strings "inf", "-inf" and "nan".
std::string dump17(const Json& j, int indent = 2);
/// Inverse of the non-finite encoding above.
double json_number(const Json& j);

Json cube_to_json(const GridCube& q, int dim);
GridCube cube_from_json(const Json& j);

/// {"dims":[...],"h":h,"cubes":[{"anchor":[...],"side":s},...]}
Json to_json(const CubeFamily& fam);
CubeFamily family_from_json(const Json& j);

Json to_json(const SparseFamily& s, int dim);
SparseFamily sparse_from_json(const Json& j);

Json to_json(const OverlapFamily& o, int dim);
OverlapFamily overlap_from_json(const Json& j);

/// Summary fields; per-level rows are included when `rows` is set.
Json to_json(const TheoremReport& r, bool rows = false);

}  // namespace cubemax

#endif  // CUBEMAX_SERIALIZE_HPP
