#include "hefie/schur.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

namespace hefie {

VectorXc SchurBlock::apply(const VectorXc& x) const {
  if (lowrank) return lr.U * (lr.V * x);
  return dense * x;
}

VectorXc SchurBlock::apply_transpose(const VectorXc& x) const {
  if (lowrank) return lr.V.transpose() * (lr.U.transpose() * x);
  return dense.transpose() * x;
}

std::size_t SchurBlock::stored_values() const {
  if (lowrank) return lr.stored_values();
  return static_cast<std::size_t>(dense.rows()) * dense.cols();
}

VectorXc SchurPreconditioner::apply_right(const VectorXc& x) const {
  VectorXc y = x;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const int k = it->pivot;
    const int ok = offsets[k], mk = offsets[k + 1] - ok;
    for (const auto& [j, alpha] : it->coeffs) {
      const int oj = offsets[j], mj = offsets[j + 1] - oj;
      y.segment(ok, mk) += alpha.apply(y.segment(oj, mj));
    }
  }
  return y;
}

void SchurPreconditioner::apply_right_matrix(MatrixXc& x) const {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const int k = it->pivot;
    const int ok = offsets[k], mk = offsets[k + 1] - ok;
    for (const auto& [j, alpha] : it->coeffs) {
      const int oj = offsets[j], mj = offsets[j + 1] - oj;
      if (alpha.lowrank)
        x.middleRows(ok, mk) +=
            alpha.lr.U * (alpha.lr.V * x.middleRows(oj, mj));
      else
        x.middleRows(ok, mk) += alpha.dense * x.middleRows(oj, mj);
    }
  }
}

VectorXc SchurPreconditioner::apply_left(const VectorXc& x) const {
  VectorXc y = x;
  for (const ScalingStep& step : steps) {
    const int k = step.pivot;
    const int ok = offsets[k], mk = offsets[k + 1] - ok;
    const VectorXc xk = y.segment(ok, mk);
    for (const auto& [j, alpha] : step.coeffs) {
      const int oj = offsets[j], mj = offsets[j + 1] - oj;
      y.segment(oj, mj) += alpha.apply_transpose(xk);
    }
  }
  return y;
}

VectorXc SchurPreconditioner::solve_diag(const VectorXc& y) const {
  VectorXc x(y.size());
  for (int k = 0; k < leaf_count(); ++k) {
    const int ok = offsets[k], mk = offsets[k + 1] - ok;
    x.segment(ok, mk) = diag_lu[k].solve(y.segment(ok, mk));
  }
  return x;
}

namespace {

// - A^T W with A = Z_ka, W = Z_kk^{-1} Z_kb, in whichever factored form
// keeps the cost low
SchurBlock negative_transpose_product(const SchurBlock& a, const SchurBlock& w) {
  SchurBlock out;
  if (!a.lowrank && !w.lowrank) {
    out.dense.noalias() = -(a.dense.transpose() * w.dense);
    return out;
  }
  out.lowrank = true;
  if (a.lowrank && !w.lowrank) {
    out.lr.U = a.lr.V.transpose();
    out.lr.V.noalias() = -(a.lr.U.transpose() * w.dense);
  } else if (!a.lowrank && w.lowrank) {
    out.lr.U.noalias() = -(a.dense.transpose() * w.lr.U);
    out.lr.V = w.lr.V;
  } else {
    const MatrixXc core = a.lr.U.transpose() * w.lr.U;  // r_a x r_w
    out.lr.U = a.lr.V.transpose();
    out.lr.V.noalias() = -(core * w.lr.V);
  }
  return out;
}

double block_norm(const SchurBlock& b) {
  if (!b.lowrank) return b.dense.norm();
  // ||U V||_F^2 = trace(G V V^H) with G = U^H U, both r x r
  const MatrixXc g = b.lr.U.adjoint() * b.lr.U;
  const MatrixXc vv = b.lr.V * b.lr.V.adjoint();
  return std::sqrt(std::abs((g * vv).trace()));
}

}  // namespace

SchurPreconditioner build_schur(const HOperator& h, SchurBuildOptions options) {
  const auto start_time = std::chrono::steady_clock::now();
  SchurPreconditioner pre;
  pre.fill_tol = options.fill_tol;
  pre.offsets = h.layout.offsets;
  const int K = h.layout.leaf_count();
  pre.diag.resize(K);
  pre.diag_lu.resize(K);

  // elimination state, upper storage (i <= j)
  std::map<std::pair<int, int>, SchurBlock> state;
  std::set<std::pair<int, int>> original;
  for (const auto& nb : h.near) {
    SchurBlock block;
    block.dense = nb.block;
    state[{nb.t, nb.s}] = std::move(block);
    original.insert({nb.t, nb.s});
  }
  for (int k = 0; k < K; ++k)
    if (!state.count({k, k}))
      throw std::runtime_error("missing diagonal near block for leaf " +
                               std::to_string(k));

  const bool compress = options.fill_tol > 0.0;
  // reference scales for dropping negligible fill-ins
  std::vector<double> diag_norm(K, 0.0);
  for (int k = 0; k < K; ++k) diag_norm[k] = state.at({k, k}).dense.norm();
  auto fill_rank_cap = [](int m, int n) { return std::max(1, std::min(m, n) / 2); };

  // turns a low-rank accumulation into its stored form, falling back to
  // dense when the rank cap is exceeded
  auto settle_fill = [&](SchurBlock& block) {
    if (!block.lowrank) return;
    block.lr = recompress(block.lr, options.fill_tol);
    if (block.lr.rank() > fill_rank_cap(block.lr.rows(), block.lr.cols())) {
      block.dense = block.lr.materialize();
      block.lowrank = false;
      block.lr = LowRankBlock{};
      ++pre.stats.dense_fallbacks;
    }
  };
  // accumulated factors are only recompressed once the stacked rank grows
  // past twice the fallback cap; blocks are settled right before they are
  // consumed, so repeated small updates don't each pay a full QR + SVD
  auto settle_trigger = [&](const SchurBlock& block) {
    return block.lowrank &&
           block.lr.rank() >
               2 * fill_rank_cap(static_cast<int>(block.lr.rows()),
                                 static_cast<int>(block.lr.cols()));
  };

  for (int k = 0; k < K; ++k) {
    SchurBlock& diag_block = state.at({k, k});
    pre.diag[k] = std::move(diag_block.dense);
    pre.diag_lu[k].compute(pre.diag[k]);
    const MatrixXc& lu_m = pre.diag_lu[k].matrixLU();
    for (int d = 0; d < lu_m.rows(); ++d)
      if (lu_m(d, d) == Complex(0))
        throw std::runtime_error("singular pivot block at leaf " +
                                 std::to_string(k));

    std::vector<int> live;
    for (auto it = state.lower_bound({k, k + 1});
         it != state.end() && it->first.first == k; ++it)
      live.push_back(it->first.second);

    // alpha_kj = -Z_kk^{-1} Z_kj
    ScalingStep step;
    step.pivot = k;
    std::vector<SchurBlock> w;  // Z_kk^{-1} Z_kj, same order as live
    w.reserve(live.size());
    for (int j : live) {
      const SchurBlock& zkj = state.at({k, j});
      SchurBlock wj;
      if (zkj.lowrank) {
        wj.lowrank = true;
        wj.lr.U = pre.diag_lu[k].solve(zkj.lr.U);
        wj.lr.V = zkj.lr.V;
      } else {
        wj.dense = pre.diag_lu[k].solve(zkj.dense);
      }
      ++pre.stats.block_solves;
      SchurBlock alpha;
      alpha.fill_in = zkj.fill_in;
      if (wj.lowrank) {
        alpha.lowrank = true;
        alpha.lr.U = -wj.lr.U;
        alpha.lr.V = wj.lr.V;
      } else {
        alpha.dense = -wj.dense;
      }
      step.coeffs.emplace_back(j, std::move(alpha));
      w.push_back(std::move(wj));
    }

    // symmetric Schur updates: Z_ab -= Z_ka^T Z_kk^{-1} Z_kb for a <= b
    std::vector<double> row_norm(live.size()), w_norm(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      row_norm[i] = block_norm(state.at({k, live[i]}));
      w_norm[i] = block_norm(w[i]);
    }
    for (std::size_t ai = 0; ai < live.size(); ++ai) {
      const int a = live[ai];
      const SchurBlock& zka = state.at({k, a});
      for (std::size_t bi = ai; bi < live.size(); ++bi) {
        const int b = live[bi];
        auto target = state.find({a, b});
        const bool is_fill = !original.count({a, b});
        if (options.drop_fill_ins && is_fill) continue;

        // updates below the drop threshold are skipped outright; for new
        // positions this is what keeps the wavefront (and the setup cost)
        // from growing. ||Z_ka^T W_b||_F <= ||Z_ka||_F ||W_b||_F screens
        // the pair before the product is ever formed
        const double drop_at = 0.1 * options.fill_tol *
                               std::sqrt(diag_norm[a] * diag_norm[b]);
        if (compress && row_norm[ai] * w_norm[bi] <= drop_at) continue;

        SchurBlock update = negative_transpose_product(zka, w[bi]);
        if (target == state.end()) {
          if (compress && block_norm(update) <= drop_at) continue;
          SchurBlock block;
          block.fill_in = true;
          ++pre.stats.fill_in_blocks;
          if (!compress) {
            block.dense = update.materialize();
          } else if (update.lowrank) {
            block.lowrank = true;
            block.lr = update.lr;
            settle_fill(block);
          } else {
            CompressResult cr = compress_dense(update.dense, options.fill_tol);
            if (cr.keep_dense) {
              block.dense = std::move(update.dense);
              ++pre.stats.dense_fallbacks;
            } else {
              block.lowrank = true;
              block.lr = std::move(cr.block);
            }
          }
          state.emplace(std::make_pair(a, b), std::move(block));
          continue;
        }
        SchurBlock& tb = target->second;
        if (!tb.lowrank) {
          if (update.lowrank)
            tb.dense.noalias() += update.lr.U * update.lr.V;
          else
            tb.dense += update.dense;
        } else {
          if (!update.lowrank) {
            CompressResult cr = compress_dense(update.dense, options.fill_tol);
            if (cr.keep_dense) {
              tb.dense = tb.lr.materialize() + update.dense;
              tb.lowrank = false;
              tb.lr = LowRankBlock{};
              ++pre.stats.dense_fallbacks;
              continue;
            }
            update.lowrank = true;
            update.lr = std::move(cr.block);
          }
          // concatenate factors, then recompress
          const int r0 = tb.lr.rank(), r1 = update.lr.rank();
          MatrixXc u(tb.lr.rows(), r0 + r1), v(r0 + r1, tb.lr.cols());
          u.leftCols(r0) = tb.lr.U;
          u.rightCols(r1) = update.lr.U;
          v.topRows(r0) = tb.lr.V;
          v.bottomRows(r1) = update.lr.V;
          tb.lr.U = std::move(u);
          tb.lr.V = std::move(v);
          settle_fill(tb);
        }
      }
    }

    // row k is done; its state blocks are no longer needed
    for (int j : live) state.erase({k, j});
    state.erase({k, k});

    pre.stats.nnz += static_cast<std::size_t>(pre.offsets[k + 1] - pre.offsets[k]);
    for (const auto& [j, alpha] : step.coeffs)
      pre.stats.nnz += alpha.stored_values();
    pre.steps.push_back(std::move(step));
  }

  pre.stats.setup_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
          .count();
  return pre;
}

SchurPreconditioner null_field_build(const HOperator& h) {
  SchurBuildOptions options;
  options.drop_fill_ins = true;
  options.fill_tol = 0.0;
  return build_schur(h, options);
}

SchurPreconditioner block_jacobi_build(const HOperator& h) {
  SchurPreconditioner pre;
  pre.offsets = h.layout.offsets;
  const int K = h.layout.leaf_count();
  pre.diag.resize(K);
  pre.diag_lu.resize(K);
  for (int k = 0; k < K; ++k) {
    const MatrixXc* block = h.near_block(k, k);
    if (!block)
      throw std::runtime_error("missing diagonal near block for leaf " +
                               std::to_string(k));
    pre.diag[k] = *block;
    pre.diag_lu[k].compute(pre.diag[k]);
  }
  return pre;
}

MatrixXc scaled_near_dense(const HOperator& h, const SchurPreconditioner& pre) {
  const int n = h.size();
  MatrixXc zn = MatrixXc::Zero(n, n);
  for (const auto& nb : h.near) {
    const int ot = h.layout.offsets[nb.t], mt = h.layout.leaf_size(nb.t);
    const int os = h.layout.offsets[nb.s], ms = h.layout.leaf_size(nb.s);
    zn.block(ot, os, mt, ms) = nb.block;
    if (nb.t != nb.s) zn.block(os, ot, ms, mt) = nb.block.transpose();
  }
  MatrixXc r = MatrixXc::Identity(n, n);
  pre.apply_right_matrix(r);
  const MatrixXc s = zn * r;
  return r.transpose() * s;
}

}  // namespace hefie
