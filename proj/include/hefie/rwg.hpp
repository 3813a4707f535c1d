#pragma once

#include <vector>

#include "hefie/mesh.hpp"

namespace hefie {

/// One RWG basis function: current flows from the plus triangle across the
/// defining edge into the minus triangle. The plus triangle is the
/// lower-index one.
struct RwgEdge {
  int v0, v1;          // defining edge, v0 < v1
  int tri_plus;        // lower triangle index
  int tri_minus;
  int free_plus;       // vertex of tri_plus opposite the edge
  int free_minus;
  double length;       // |v1 - v0| in meters
};

struct RwgBasis {
  const TriangleMesh* mesh = nullptr;
  std::vector<RwgEdge> edges;

  int size() const { return static_cast<int>(edges.size()); }
  /// midpoint of the defining edge; the per-unknown point for clustering
  Vec3 center(int n) const;
};

/// One basis per interior edge, ordered lexicographically by the sorted
/// vertex index pair. Throws MeshError on non-manifold input.
RwgBasis build_rwg(const TriangleMesh& mesh);

}  // namespace hefie
