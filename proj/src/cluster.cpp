#include "hefie/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace hefie {

ClusterTree build_tree(const RwgBasis& basis, TreeOptions options) {
  ClusterTree tree;
  const int n = basis.size();
  if (n == 0) return tree;

  Vec3 lo = basis.center(0), hi = basis.center(0);
  for (int i = 1; i < n; ++i) {
    lo = lo.cwiseMin(basis.center(i));
    hi = hi.cwiseMax(basis.center(i));
  }
  ClusterNode root;
  root.center = 0.5 * (lo + hi);
  root.half_width = 0.5 * (hi - lo).maxCoeff();
  if (root.half_width <= 0.0) root.half_width = 1.0;
  root.half_width *= 1.0 + 1e-12;  // keep boundary points inside
  root.level = 0;
  root.bases.resize(n);
  for (int i = 0; i < n; ++i) root.bases[i] = i;
  tree.nodes.push_back(std::move(root));

  std::function<void(int)> split = [&](int id) {
    // copy out: nodes vector reallocates while we recurse
    const Vec3 center = tree.nodes[id].center;
    const double hw = tree.nodes[id].half_width;
    const int level = tree.nodes[id].level;
    const std::vector<int> bases = tree.nodes[id].bases;
    tree.levels = std::max(tree.levels, level);
    if (static_cast<int>(bases.size()) <= options.leaf_size ||
        (options.max_level >= 0 && level >= options.max_level)) {
      tree.leaves.push_back(id);
      return;
    }
    std::array<std::vector<int>, 8> buckets;
    for (int b : bases) {
      const Vec3 p = basis.center(b);
      int octant = (p.x() >= center.x() ? 1 : 0) |
                   (p.y() >= center.y() ? 2 : 0) |
                   (p.z() >= center.z() ? 4 : 0);
      buckets[octant].push_back(b);
    }
    for (int o = 0; o < 8; ++o) {
      if (buckets[o].empty()) continue;
      ClusterNode child;
      child.center = center + 0.5 * hw *
                                  Vec3((o & 1) ? 1.0 : -1.0,
                                       (o & 2) ? 1.0 : -1.0,
                                       (o & 4) ? 1.0 : -1.0);
      child.half_width = 0.5 * hw;
      child.level = level + 1;
      child.bases = std::move(buckets[o]);
      const int cid = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(std::move(child));
      tree.nodes[id].children.push_back(cid);
      split(cid);
    }
  };
  split(0);
  return tree;
}

bool admissible(const ClusterNode& t, const ClusterNode& s, double eta) {
  const double dia_t = t.diameter();
  const double dia_s = s.diameter();
  const double gap = std::max(
      0.0, (t.center - s.center).norm() - 0.5 * (dia_t + dia_s));
  return std::min(dia_t, dia_s) <= eta * gap;
}

BlockPartition build_partition(const ClusterTree& tree, double eta) {
  BlockPartition partition;
  if (tree.nodes.empty()) return partition;
  std::vector<int> leaf_position(tree.nodes.size(), -1);
  for (int i = 0; i < tree.leaf_count(); ++i) leaf_position[tree.leaves[i]] = i;

  std::function<void(int, int)> visit = [&](int t, int s) {
    const ClusterNode& nt = tree.nodes[t];
    const ClusterNode& ns = tree.nodes[s];
    if (t != s && admissible(nt, ns, eta)) {
      partition.far_blocks.push_back({t, s, std::max(nt.level, ns.level)});
      return;
    }
    if (nt.is_leaf() && ns.is_leaf()) {
      partition.near_blocks.push_back({leaf_position[t], leaf_position[s]});
      return;
    }
    // a leaf paired against an interior node stands in for its own children
    const std::vector<int> tc = nt.is_leaf() ? std::vector<int>{t} : nt.children;
    const std::vector<int> sc = ns.is_leaf() ? std::vector<int>{s} : ns.children;
    for (int a : tc)
      for (int b : sc) visit(a, b);
  };
  visit(0, 0);
  return partition;
}

std::size_t NearFieldGraph::edge_count() const {
  std::size_t c = 0;
  for (const auto& adj : adjacency) c += adj.size();
  return c / 2;
}

NearFieldGraph near_field_graph(const BlockPartition& partition,
                                int leaf_count) {
  NearFieldGraph g;
  g.vertex_count = leaf_count;
  g.adjacency.resize(leaf_count);
  std::set<std::pair<int, int>> seen;
  for (const NearBlock& nb : partition.near_blocks) {
    if (nb.t_leaf == nb.s_leaf) continue;
    auto key = std::minmax(nb.t_leaf, nb.s_leaf);
    if (!seen.insert(key).second) continue;
    g.adjacency[key.first].push_back(key.second);
    g.adjacency[key.second].push_back(key.first);
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

}  // namespace hefie
