#pragma once

#include <vector>

#include "hefie/rwg.hpp"

namespace hefie {

/// Oct-tree over the RWG edge midpoints. Nodes hold the basis indices they
/// contain; empty octants are pruned.
struct ClusterNode {
  Vec3 center;
  double half_width;
  int level;
  std::vector<int> bases;      // all contained basis indices
  std::vector<int> children;   // node ids, empty for leaves

  bool is_leaf() const { return children.empty(); }
  double diameter() const { return 2.0 * std::sqrt(3.0) * half_width; }
};

struct ClusterTree {
  std::vector<ClusterNode> nodes;  // nodes[0] is the root
  std::vector<int> leaves;         // leaf node ids in depth-first order
  int levels = 0;                  // deepest node level

  int size() const { return nodes.empty() ? 0 : static_cast<int>(nodes[0].bases.size()); }
  int leaf_count() const { return static_cast<int>(leaves.size()); }
};

struct TreeOptions {
  int leaf_size = 100;
  int max_level = -1;  // < 0: unlimited
};

ClusterTree build_tree(const RwgBasis& basis, TreeOptions options = {});

/// Eq.-8 style admissibility with cube diagonals as diameters and the
/// surface gap (center distance minus half-diagonals, floored at 0) as the
/// distance metric. Touching cubes are never admissible.
bool admissible(const ClusterNode& t, const ClusterNode& s, double eta);

struct FarBlock {
  int t_node, s_node;  // cluster node ids
  int level;
};

struct NearBlock {
  int t_leaf, s_leaf;  // positions into tree.leaves
};

/// Dual-tree partition: admissible pairs become far blocks at the level they
/// first separate; leaf-level non-admissible pairs become near blocks.
struct BlockPartition {
  std::vector<FarBlock> far_blocks;
  std::vector<NearBlock> near_blocks;  // symmetric: (t,s) present iff (s,t)
};

BlockPartition build_partition(const ClusterTree& tree, double eta);

/// Simple undirected graph over leaves; one edge per off-diagonal near pair.
struct NearFieldGraph {
  int vertex_count = 0;
  std::vector<std::vector<int>> adjacency;  // sorted, no self loops

  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
  std::size_t edge_count() const;
};

NearFieldGraph near_field_graph(const BlockPartition& partition, int leaf_count);

}  // namespace hefie
