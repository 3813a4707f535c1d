#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "hefie/mesh.hpp"
#include "hefie/ordering.hpp"
#include "support/oracles.hpp"

using namespace hefie;

namespace {

NearFieldGraph path_graph(int n) {
  NearFieldGraph g;
  g.vertex_count = n;
  g.adjacency.resize(n);
  for (int i = 0; i + 1 < n; ++i) {
    g.adjacency[i].push_back(i + 1);
    g.adjacency[i + 1].push_back(i);
  }
  return g;
}

NearFieldGraph star_graph(int n) {
  NearFieldGraph g;
  g.vertex_count = n;
  g.adjacency.resize(n);
  for (int i = 1; i < n; ++i) {
    g.adjacency[0].push_back(i);
    g.adjacency[i].push_back(0);
  }
  return g;
}

NearFieldGraph complete_graph(int n) {
  NearFieldGraph g;
  g.vertex_count = n;
  g.adjacency.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g.adjacency[i].push_back(j);
  return g;
}

bool is_permutation_of_all(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

TEST_SUITE("ordering") {

TEST_CASE("path graphs order to bandwidth one") {
  const NearFieldGraph g = path_graph(12);
  for (auto alg : {OrderingAlgorithm::cm, OrderingAlgorithm::rcm,
                   OrderingAlgorithm::king, OrderingAlgorithm::sloan}) {
    const LeafOrdering ord = compute_ordering(g, alg);
    REQUIRE(is_permutation_of_all(ord.permutation, 12));
    CHECK(bandwidth(g, ord.permutation) == 1);
  }
}

TEST_CASE("rcm reverses cm") {
  const NearFieldGraph g = oracles::random_graph(40, 0.1, 11);
  const LeafOrdering cm_ord = cuthill_mckee(g);
  const LeafOrdering rcm_ord = reverse_cuthill_mckee(g);
  std::vector<int> reversed(cm_ord.permutation.rbegin(),
                            cm_ord.permutation.rend());
  CHECK(rcm_ord.permutation == reversed);
}

TEST_CASE("complete graph bandwidth is n minus one") {
  const NearFieldGraph g = complete_graph(7);
  for (auto alg : {OrderingAlgorithm::rcm, OrderingAlgorithm::sloan}) {
    const LeafOrdering ord = compute_ordering(g, alg);
    CHECK(bandwidth(g, ord.permutation) == 6);
  }
}

TEST_CASE("king beats plain cm on the star front") {
  const NearFieldGraph g = star_graph(7);
  const LeafOrdering cm_ord = cuthill_mckee(g);
  const LeafOrdering king_ord = king(g);
  CHECK(max_wavefront(g, king_ord.permutation) <=
        max_wavefront(g, cm_ord.permutation));
}

TEST_CASE("random graphs give valid permutations and honest metrics") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const int n = 20 + static_cast<int>(seed) * 9;  // up to 191
    const NearFieldGraph g = oracles::random_graph(n, 4.0 / n, seed);
    for (auto alg : {OrderingAlgorithm::none, OrderingAlgorithm::cm,
                     OrderingAlgorithm::rcm, OrderingAlgorithm::king,
                     OrderingAlgorithm::sloan}) {
      const LeafOrdering ord = compute_ordering(g, alg);
      REQUIRE(is_permutation_of_all(ord.permutation, n));
      CHECK(bandwidth(g, ord.permutation) ==
            oracles::ref_bandwidth(g.adjacency, ord.permutation));
      CHECK(profile(g, ord.permutation) ==
            oracles::ref_profile(g.adjacency, ord.permutation));
    }
    const LeafOrdering rcm_ord = reverse_cuthill_mckee(g);
    CHECK(bandwidth(g, rcm_ord.permutation) <=
          bandwidth(g, identity_perm(n)));
  }
}

TEST_CASE("deterministic across runs") {
  const NearFieldGraph g = oracles::random_graph(60, 0.08, 42);
  for (auto alg : {OrderingAlgorithm::rcm, OrderingAlgorithm::king,
                   OrderingAlgorithm::sloan}) {
    const LeafOrdering a = compute_ordering(g, alg);
    const LeafOrdering b = compute_ordering(g, alg);
    CHECK(a.permutation == b.permutation);
  }
}

TEST_CASE("disconnected graphs are fully ordered") {
  NearFieldGraph g = path_graph(5);
  g.vertex_count = 11;
  g.adjacency.resize(11);
  for (int i = 6; i < 10; ++i) {
    g.adjacency[i].push_back(i + 1);
    g.adjacency[i + 1].push_back(i);
  }  // vertex 5 isolated, second path 6..10
  for (auto alg : {OrderingAlgorithm::cm, OrderingAlgorithm::rcm,
                   OrderingAlgorithm::king, OrderingAlgorithm::sloan}) {
    const LeafOrdering ord = compute_ordering(g, alg);
    REQUIRE(is_permutation_of_all(ord.permutation, 11));
    CHECK(bandwidth(g, ord.permutation) <= 10);
  }
}

TEST_CASE("edgeless graph") {
  NearFieldGraph g;
  g.vertex_count = 4;
  g.adjacency.resize(4);
  for (auto alg : {OrderingAlgorithm::rcm, OrderingAlgorithm::sloan}) {
    const LeafOrdering ord = compute_ordering(g, alg);
    REQUIRE(is_permutation_of_all(ord.permutation, 4));
    CHECK(bandwidth(g, ord.permutation) == 0);
    CHECK(profile(g, ord.permutation) == 0);
  }
}

TEST_CASE("orderings improve a plate near field graph") {
  const TriangleMesh mesh = generate_plate(4.0, 4.0, 10, 1e9);
  const RwgBasis basis = build_rwg(mesh);
  TreeOptions opts;
  opts.leaf_size = 40;
  const ClusterTree tree = build_tree(basis, opts);
  const BlockPartition part = build_partition(tree, 1.0);
  const NearFieldGraph g = near_field_graph(part, tree.leaf_count());
  const std::vector<int> natural = identity_perm(g.vertex_count);

  const LeafOrdering rcm_ord = reverse_cuthill_mckee(g);
  CHECK(profile(g, rcm_ord.permutation) <= profile(g, natural));
  const LeafOrdering sloan_ord = sloan(g);
  CHECK(max_wavefront(g, sloan_ord.permutation) <=
        max_wavefront(g, natural));
}

TEST_CASE("string conversions roundtrip") {
  for (auto alg : {OrderingAlgorithm::none, OrderingAlgorithm::cm,
                   OrderingAlgorithm::rcm, OrderingAlgorithm::king,
                   OrderingAlgorithm::sloan})
    CHECK(ordering_from_string(to_string(alg)) == alg);
  CHECK_THROWS_AS(ordering_from_string("nope"), std::invalid_argument);
}

}  // TEST_SUITE
