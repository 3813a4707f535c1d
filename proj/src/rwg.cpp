#include "hefie/rwg.hpp"

#include <algorithm>
#include <map>

namespace hefie {

Vec3 RwgBasis::center(int n) const {
  const RwgEdge& e = edges[n];
  return 0.5 * (mesh->vertices[e.v0] + mesh->vertices[e.v1]);
}

RwgBasis build_rwg(const TriangleMesh& mesh) {
  validate_mesh(mesh);
  std::map<std::pair<int, int>, std::vector<int>> incident;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      incident[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }
  RwgBasis basis;
  basis.mesh = &mesh;
  auto free_vertex = [&](int t, int v0, int v1) {
    for (int v : mesh.triangles[t])
      if (v != v0 && v != v1) return v;
    return -1;
  };
  // std::map iteration gives the lexicographic edge ordering
  for (const auto& [edge, tris] : incident) {
    if (tris.size() != 2) continue;
    RwgEdge e;
    e.v0 = edge.first;
    e.v1 = edge.second;
    e.tri_plus = std::min(tris[0], tris[1]);
    e.tri_minus = std::max(tris[0], tris[1]);
    e.free_plus = free_vertex(e.tri_plus, e.v0, e.v1);
    e.free_minus = free_vertex(e.tri_minus, e.v0, e.v1);
    e.length = (mesh.vertices[e.v1] - mesh.vertices[e.v0]).norm();
    basis.edges.push_back(e);
  }
  return basis;
}

}  // namespace hefie
