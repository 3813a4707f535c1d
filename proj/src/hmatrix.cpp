#include "hefie/hmatrix.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hefie {

Layout make_layout(const ClusterTree& tree, const std::vector<int>& leaf_order) {
  Layout layout;
  const int k = tree.leaf_count();
  std::vector<int> order(leaf_order);
  if (order.empty()) {
    order.resize(k);
    for (int i = 0; i < k; ++i) order[i] = i;
  }
  layout.leaf_nodes.reserve(k);
  layout.offsets.push_back(0);
  for (int pos : order) {
    const int node = tree.leaves[pos];
    layout.leaf_nodes.push_back(node);
    for (int b : tree.nodes[node].bases) layout.perm.push_back(b);
    layout.offsets.push_back(static_cast<int>(layout.perm.size()));
  }
  layout.inv_perm.resize(layout.perm.size());
  for (int p = 0; p < static_cast<int>(layout.perm.size()); ++p)
    layout.inv_perm[layout.perm[p]] = p;
  return layout;
}

void HOperator::ensure_index() const {
  if (!near_index_.empty() || near.empty()) return;
  for (int i = 0; i < static_cast<int>(near.size()); ++i)
    near_index_[{near[i].t, near[i].s}] = i;
}

const MatrixXc* HOperator::near_block(int t, int s) const {
  ensure_index();
  auto it = near_index_.find({t, s});
  return it == near_index_.end() ? nullptr : &near[it->second].block;
}

std::vector<std::pair<int, int>> HOperator::near_pattern() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(near.size());
  for (const auto& nb : near) out.emplace_back(nb.t, nb.s);
  return out;
}

VectorXc HOperator::near_matvec_permuted(const VectorXc& x) const {
  VectorXc y = VectorXc::Zero(size());
  for (const NearEntry& nb : near) {
    const int ot = layout.offsets[nb.t], mt = layout.leaf_size(nb.t);
    const int os = layout.offsets[nb.s], ms = layout.leaf_size(nb.s);
    y.segment(ot, mt) += nb.block * x.segment(os, ms);
    if (nb.t != nb.s)
      y.segment(os, ms) += nb.block.transpose() * x.segment(ot, mt);
  }
  return y;
}

VectorXc HOperator::far_matvec_permuted(const VectorXc& x) const {
  VectorXc y = VectorXc::Zero(size());
  for (const FarEntry& fb : far) {
    const int m = static_cast<int>(fb.row_pos.size());
    const int n = static_cast<int>(fb.col_pos.size());
    VectorXc xs(n), xt(m);
    for (int j = 0; j < n; ++j) xs(j) = x(fb.col_pos[j]);
    for (int i = 0; i < m; ++i) xt(i) = x(fb.row_pos[i]);
    const VectorXc yt = fb.lr.U * (fb.lr.V * xs);
    const VectorXc ys = fb.lr.V.transpose() * (fb.lr.U.transpose() * xt);
    for (int i = 0; i < m; ++i) y(fb.row_pos[i]) += yt(i);
    for (int j = 0; j < n; ++j) y(fb.col_pos[j]) += ys(j);
  }
  return y;
}

VectorXc HOperator::matvec_permuted(const VectorXc& x) const {
  if (x.size() != size()) throw std::invalid_argument("matvec dimension mismatch");
  return near_matvec_permuted(x) + far_matvec_permuted(x);
}

VectorXc HOperator::matvec(const VectorXc& x) const {
  if (x.size() != size()) throw std::invalid_argument("matvec dimension mismatch");
  VectorXc xp(size());
  for (int p = 0; p < size(); ++p) xp(p) = x(layout.perm[p]);
  const VectorXc yp = matvec_permuted(xp);
  VectorXc y(size());
  for (int p = 0; p < size(); ++p) y(layout.perm[p]) = yp(p);
  return y;
}

StorageReport HOperator::storage_report() const {
  StorageReport report;
  for (const NearEntry& nb : near)
    report.near_values += static_cast<std::size_t>(nb.block.rows()) * nb.block.cols();
  for (const FarEntry& fb : far) report.far_values += fb.lr.stored_values();
  report.total_bytes = (report.near_values + report.far_values) * sizeof(Complex);
  return report;
}

HOperator assemble_hmatrix(const EfieAssembler& assembler,
                           const ClusterTree& tree,
                           const BlockPartition& partition,
                           const Layout& layout,
                           HAssemblyOptions options) {
  HOperator h;
  h.layout = layout;

  // layout leaf index of each tree-leaf position
  std::vector<int> layout_leaf(tree.leaf_count(), -1);
  for (int k = 0; k < layout.leaf_count(); ++k) {
    for (int pos = 0; pos < tree.leaf_count(); ++pos)
      if (tree.leaves[pos] == layout.leaf_nodes[k]) layout_leaf[pos] = k;
  }

  // near: keep t <= s in layout numbering, sorted for determinism
  std::set<std::pair<int, int>> near_pairs;
  for (const NearBlock& nb : partition.near_blocks) {
    int t = layout_leaf[nb.t_leaf], s = layout_leaf[nb.s_leaf];
    if (t > s) std::swap(t, s);
    near_pairs.insert({t, s});
  }
  for (const auto& [t, s] : near_pairs) {
    HOperator::NearEntry entry;
    entry.t = t;
    entry.s = s;
    std::vector<int> rows, cols;
    for (int p = layout.offsets[t]; p < layout.offsets[t + 1]; ++p)
      rows.push_back(layout.perm[p]);
    for (int p = layout.offsets[s]; p < layout.offsets[s + 1]; ++p)
      cols.push_back(layout.perm[p]);
    if (t == s) {
      // assemble the upper triangle and mirror: exactly symmetric
      const int m = static_cast<int>(rows.size());
      entry.block.resize(m, m);
      for (int i = 0; i < m; ++i) {
        std::vector<int> row1{rows[i]};
        std::vector<int> tail(cols.begin() + i, cols.end());
        MatrixXc strip;
        assembler.assemble_block(row1, tail, strip);
        entry.block.row(i).tail(m - i) = strip.row(0);
      }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) entry.block(i, j) = entry.block(j, i);
    } else {
      assembler.assemble_block(rows, cols, entry.block);
    }
    h.near.push_back(std::move(entry));
  }

  // far: assemble the lower node id orientation only; the transpose is
  // applied in matvec
  std::vector<const FarBlock*> far_sorted;
  for (const FarBlock& fb : partition.far_blocks)
    if (fb.t_node < fb.s_node) far_sorted.push_back(&fb);
  std::sort(far_sorted.begin(), far_sorted.end(),
            [](const FarBlock* a, const FarBlock* b) {
              return std::tie(a->t_node, a->s_node) < std::tie(b->t_node, b->s_node);
            });
  for (const FarBlock* fb : far_sorted) {
    HOperator::FarEntry entry;
    const auto& trow = tree.nodes[fb->t_node].bases;
    const auto& tcol = tree.nodes[fb->s_node].bases;
    entry.row_pos.reserve(trow.size());
    entry.col_pos.reserve(tcol.size());
    for (int b : trow) entry.row_pos.push_back(layout.inv_perm[b]);
    for (int b : tcol) entry.col_pos.push_back(layout.inv_perm[b]);

    EntryGenerator gen;
    gen.rows = static_cast<int>(trow.size());
    gen.cols = static_cast<int>(tcol.size());
    gen.entry = [&](int i, int j) { return assembler.entry(trow[i], tcol[j]); };
    gen.row = [&](int i, VectorXc& out) {
      std::vector<int> r{trow[i]};
      MatrixXc strip;
      assembler.assemble_block(r, tcol, strip);
      out = strip.row(0).transpose();
    };
    gen.col = [&](int j, VectorXc& out) {
      std::vector<int> c{tcol[j]};
      MatrixXc strip;
      assembler.assemble_block(trow, c, strip);
      out = strip.col(0);
    };
    // small far blocks can carry numerical rank near min(m,n); the /2
    // safety cap only makes sense once the block is large enough for
    // low-rank storage to pay off
    int max_rank = options.max_rank;
    if (max_rank < 0) {
      const int mn = std::min(gen.rows, gen.cols);
      max_rank = std::min(mn, std::max(30, mn / 2));
    }
    LowRankBlock lr = aca(gen, options.tol_aca, max_rank);
    if (!lr.converged)
      throw std::runtime_error(
          "ACA did not converge on far block (" + std::to_string(fb->t_node) +
          ", " + std::to_string(fb->s_node) + "): check admissibility");
    entry.lr = recompress(lr, options.tol_aca);
    h.far.push_back(std::move(entry));
  }
  return h;
}

}  // namespace hefie
