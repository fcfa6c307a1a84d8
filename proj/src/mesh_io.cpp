#include "hardy/io.hpp"

namespace hardy {

void to_json(nlohmann::json& j, const Mesh1D& m) {
  j = nlohmann::json{{"kind", "interval"},
                     {"vertices", m.nodes},
                     {"cells", m.cell_count()},
                     {"tags", {{"0", 0}, {"1", m.nodes.empty() ? 0 : m.nodes.size() - 1}}}};
}

void to_json(nlohmann::json& j, const TriMesh& m) {
  auto verts = nlohmann::json::array();
  for (const auto& v : m.vertices) verts.push_back({v.x, v.y});
  auto cells = nlohmann::json::array();
  for (const auto& t : m.triangles) cells.push_back({t[0], t[1], t[2]});
  auto tags = nlohmann::json::array();
  for (const auto& e : m.boundary_edges) tags.push_back({e.v0, e.v1, e.piece_id});
  j = nlohmann::json{{"kind", "triangles"}, {"vertices", verts}, {"cells", cells}, {"tags", tags}};
}

void to_json(nlohmann::json& j, const RadialLogMesh& m) {
  j = nlohmann::json{{"kind", "radial_log"}, {"radius", m.radius}, {"s_nodes", m.s_nodes}};
}

}  // namespace hardy
