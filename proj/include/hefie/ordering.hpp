#pragma once

#include <string>
#include <vector>

#include "hefie/cluster.hpp"

namespace hefie {

enum class OrderingAlgorithm { none, cm, rcm, king, sloan };

OrderingAlgorithm ordering_from_string(const std::string& name);
std::string to_string(OrderingAlgorithm alg);

/// permutation[k] = old vertex ordered k-th
struct LeafOrdering {
  std::vector<int> permutation;
  OrderingAlgorithm algorithm = OrderingAlgorithm::none;
};

LeafOrdering cuthill_mckee(const NearFieldGraph& g);
LeafOrdering reverse_cuthill_mckee(const NearFieldGraph& g);
LeafOrdering king(const NearFieldGraph& g);
LeafOrdering sloan(const NearFieldGraph& g);
LeafOrdering identity_ordering(const NearFieldGraph& g);
LeafOrdering compute_ordering(const NearFieldGraph& g, OrderingAlgorithm alg);

/// max |pos(u) - pos(v)| over edges; 0 for edgeless graphs
int bandwidth(const NearFieldGraph& g, const std::vector<int>& permutation);
/// sum of row front-widths: for each vertex, distance back to its earliest
/// ordered neighbor
long profile(const NearFieldGraph& g, const std::vector<int>& permutation);
/// max active front size during a left-to-right elimination sweep
int max_wavefront(const NearFieldGraph& g, const std::vector<int>& permutation);

}  // namespace hefie
