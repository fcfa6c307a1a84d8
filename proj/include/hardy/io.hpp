#pragma once

#include <json.hpp>

#include "hardy/mesh.hpp"

namespace hardy {

// Debug serialisation of meshes: vertices, cells and boundary tags. Not a
// stable interchange format.
void to_json(nlohmann::json& j, const Mesh1D& m);
void to_json(nlohmann::json& j, const TriMesh& m);
void to_json(nlohmann::json& j, const RadialLogMesh& m);

}  // namespace hardy
