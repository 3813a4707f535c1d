#include "hefie/lowrank.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <vector>

namespace hefie {

void EntryGenerator::fill_row(int i, VectorXc& out) const {
  out.resize(cols);
  if (row) {
    row(i, out);
    return;
  }
  for (int j = 0; j < cols; ++j) out(j) = entry(i, j);
}

void EntryGenerator::fill_col(int j, VectorXc& out) const {
  out.resize(rows);
  if (col) {
    col(j, out);
    return;
  }
  for (int i = 0; i < rows; ++i) out(i) = entry(i, j);
}

LowRankBlock aca(const EntryGenerator& gen, double tol, int max_rank) {
  const int m = gen.rows, n = gen.cols;
  if (max_rank < 0) max_rank = std::max(1, std::min(m, n) / 2);
  max_rank = std::min(max_rank, std::min(m, n));

  LowRankBlock block;
  block.tolerance = tol;
  block.U.resize(m, 0);
  block.V.resize(0, n);

  std::vector<char> row_used(m, 0);
  double norm_sq = 0.0;  // running |A_k|_F^2 estimate
  VectorXc row_res(n), col_res(m);

  auto first_unused = [&]() {
    for (int i = 0; i < m; ++i)
      if (!row_used[i]) return i;
    return -1;
  };

  int rank = 0;
  int preferred_row = 0;
  int small_streak = 0;
  while (rank < max_rank) {
    // probe rows until one yields a usable pivot
    int i_k = -1, j_k = -1;
    while (true) {
      int candidate =
          (preferred_row >= 0 && !row_used[preferred_row]) ? preferred_row
                                                           : first_unused();
      if (candidate < 0) break;
      gen.fill_row(candidate, row_res);
      if (rank > 0) row_res -= (block.U.row(candidate) * block.V).transpose();
      int piv;
      const double piv_mag = row_res.cwiseAbs().maxCoeff(&piv);
      row_used[candidate] = 1;
      preferred_row = -1;
      if (piv_mag > 0.0 &&
          (norm_sq == 0.0 || piv_mag * piv_mag > 1e-28 * norm_sq / n)) {
        i_k = candidate;
        j_k = piv;
        break;
      }
    }
    if (i_k < 0) break;  // rows exhausted: block is (numerically) resolved

    VectorXc v_k = row_res / row_res(j_k);
    gen.fill_col(j_k, col_res);
    if (rank > 0) col_res -= block.U * block.V.col(j_k);
    const VectorXc& u_k = col_res;

    // incremental Frobenius accumulation with cross terms
    double cross = 0.0;
    for (int l = 0; l < rank; ++l) {
      const Complex uu = block.U.col(l).dot(u_k);               // u_l^H u_k
      const Complex vv = (block.V.row(l).conjugate() * v_k)(0);  // v_l^H . v_k
      cross += 2.0 * std::real(uu * vv);
    }
    const double uk_sq = u_k.squaredNorm();
    const double vk_sq = v_k.squaredNorm();
    norm_sq = std::max(0.0, norm_sq + cross + uk_sq * vk_sq);

    block.U.conservativeResize(Eigen::NoChange, rank + 1);
    block.U.col(rank) = u_k;
    block.V.conservativeResize(rank + 1, Eigen::NoChange);
    block.V.row(rank) = v_k.transpose();
    ++rank;

    // require two consecutive small increments: a single small cross can
    // understate the residual and stop one rank short of the tolerance
    if (std::sqrt(uk_sq * vk_sq) <= tol * std::sqrt(norm_sq)) {
      if (small_streak >= 1) return block;
      ++small_streak;
    } else {
      small_streak = 0;
    }

    // next row: largest residual-column entry among unused rows
    double best = -1.0;
    for (int i = 0; i < m; ++i) {
      if (row_used[i]) continue;
      const double mag = std::abs(u_k(i));
      if (mag > best) {
        best = mag;
        preferred_row = i;
      }
    }
    if (best < 0.0) return block;  // all rows consumed
  }
  // at rank min(m, n) the cross approximation is exact; only an early cap
  // counts as a failure
  if (rank >= max_rank && rank < std::min(m, n) && small_streak == 0)
    block.converged = false;
  return block;
}

LowRankBlock recompress(const LowRankBlock& block, double tol) {
  const int r = block.rank();
  if (r == 0) return block;
  // accumulated factors can carry r > min(m, n); the QR factors are then
  // upper trapezoidal with only min(dim, r) meaningful rows
  const int ru_r = std::min<int>(static_cast<int>(block.rows()), r);
  const int rv_r = std::min<int>(static_cast<int>(block.cols()), r);
  Eigen::HouseholderQR<MatrixXc> qr_u(block.U);
  MatrixXc qu = qr_u.householderQ() * MatrixXc::Identity(block.rows(), ru_r);
  MatrixXc ru = qr_u.matrixQR().topRows(ru_r).triangularView<Eigen::Upper>();

  MatrixXc vt = block.V.transpose();  // n x r
  Eigen::HouseholderQR<MatrixXc> qr_v(vt);
  MatrixXc qv = qr_v.householderQ() * MatrixXc::Identity(block.cols(), rv_r);
  MatrixXc rv = qr_v.matrixQR().topRows(rv_r).triangularView<Eigen::Upper>();

  Eigen::JacobiSVD<MatrixXc> svd(ru * rv.transpose(),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int keep = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * sv(0)) ++keep;

  LowRankBlock out;
  out.tolerance = tol;
  out.converged = block.converged;
  out.U = qu * svd.matrixU().leftCols(keep) *
          sv.head(keep).cast<Complex>().asDiagonal();
  out.V = svd.matrixV().leftCols(keep).adjoint() * qv.transpose();
  return out;
}

CompressResult compress_dense(const MatrixXc& m, double tol) {
  CompressResult result;
  if (m.rows() == 0 || m.cols() == 0) {
    result.block.U.resize(m.rows(), 0);
    result.block.V.resize(0, m.cols());
    return result;
  }
  Eigen::BDCSVD<MatrixXc> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int keep = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * sv(0)) ++keep;
  const std::size_t lr_storage =
      static_cast<std::size_t>(keep) * (m.rows() + m.cols());
  if (lr_storage >= static_cast<std::size_t>(m.rows()) * m.cols()) {
    result.keep_dense = true;
    return result;
  }
  result.block.tolerance = tol;
  result.block.U = svd.matrixU().leftCols(keep) *
                   sv.head(keep).cast<Complex>().asDiagonal();
  result.block.V = svd.matrixV().leftCols(keep).adjoint();
  return result;
}

}  // namespace hefie
