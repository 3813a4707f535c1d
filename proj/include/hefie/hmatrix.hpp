#pragma once

#include <map>

#include "hefie/cluster.hpp"
#include "hefie/efie.hpp"
#include "hefie/lowrank.hpp"

namespace hefie {

/// Global unknown ordering: leaves laid out contiguously in elimination
/// order, each leaf keeping its basis indices grouped.
struct Layout {
  std::vector<int> leaf_nodes;  // cluster node ids, elimination order
  std::vector<int> offsets;     // size K+1, offsets[k]..offsets[k+1]
  std::vector<int> perm;        // global position -> basis index
  std::vector<int> inv_perm;    // basis index -> global position

  int leaf_count() const { return static_cast<int>(leaf_nodes.size()); }
  int leaf_size(int k) const { return offsets[k + 1] - offsets[k]; }
  int total() const { return offsets.empty() ? 0 : offsets.back(); }
};

/// leaf_order[k] = position into tree.leaves of the leaf eliminated k-th.
/// Identity order when leaf_order is empty.
Layout make_layout(const ClusterTree& tree, const std::vector<int>& leaf_order = {});

struct StorageReport {
  std::size_t near_values = 0;
  std::size_t far_values = 0;
  std::size_t total_bytes = 0;
};

/// Z = Z_N + Z_F over the layout ordering. Near blocks are stored for
/// t <= s only and mirrored as transposes, so pairwise transpose symmetry
/// is exact by construction.
class HOperator {
 public:
  struct NearEntry {
    int t, s;  // layout leaf indices, t <= s
    MatrixXc block;
  };
  struct FarEntry {
    std::vector<int> row_pos, col_pos;  // layout positions, rows from the
                                        // lower node id side
    LowRankBlock lr;
  };

  Layout layout;
  std::vector<NearEntry> near;
  std::vector<FarEntry> far;

  int size() const { return layout.total(); }

  const MatrixXc* near_block(int t, int s) const;  // t <= s, null if absent
  /// near pairs as (t, s) with t <= s
  std::vector<std::pair<int, int>> near_pattern() const;

  VectorXc matvec(const VectorXc& x) const;           // original basis ordering
  VectorXc matvec_permuted(const VectorXc& x) const;  // layout ordering
  VectorXc far_matvec_permuted(const VectorXc& x) const;
  VectorXc near_matvec_permuted(const VectorXc& x) const;

  StorageReport storage_report() const;

 private:
  mutable std::map<std::pair<int, int>, int> near_index_;
  void ensure_index() const;
};

struct HAssemblyOptions {
  double tol_aca = 1e-4;
  int max_rank = -1;  // < 0: min(m, n)/2
};

/// Near blocks dense (upper pairs only), far blocks ACA + SVD recompression.
/// Throws std::runtime_error when ACA hits max_rank on a far block.
HOperator assemble_hmatrix(const EfieAssembler& assembler,
                           const ClusterTree& tree,
                           const BlockPartition& partition,
                           const Layout& layout,
                           HAssemblyOptions options = {});

}  // namespace hefie
