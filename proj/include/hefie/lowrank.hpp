#pragma once

#include <functional>

#include "hefie/geometry.hpp"

namespace hefie {

/// U (m x r) times V (r x n).
struct LowRankBlock {
  MatrixXc U;
  MatrixXc V;
  double tolerance = 0.0;
  bool converged = true;  // false: max_rank hit before the stopping test

  int rank() const { return static_cast<int>(U.cols()); }
  int rows() const { return static_cast<int>(U.rows()); }
  int cols() const { return static_cast<int>(V.cols()); }
  std::size_t stored_values() const {
    return static_cast<std::size_t>(rank()) * (rows() + cols());
  }
  MatrixXc materialize() const { return U * V; }
};

/// Pure sampler for an implicit m x n block.
struct EntryGenerator {
  int rows = 0;
  int cols = 0;
  std::function<Complex(int, int)> entry;
  /// optional bulk samplers; default to entry-by-entry
  std::function<void(int, VectorXc&)> row;
  std::function<void(int, VectorXc&)> col;

  void fill_row(int i, VectorXc& out) const;
  void fill_col(int j, VectorXc& out) const;
};

/// Partially pivoted ACA, Frobenius-norm stopping test
/// |u_k||v_k| <= tol * |A_k| with the norm accumulated incrementally.
/// max_rank < 0 defaults to min(m, n)/2; hitting it clears `converged`.
LowRankBlock aca(const EntryGenerator& gen, double tol, int max_rank = -1);

/// QR both factors, SVD the small core, truncate below tol * sigma_max.
/// Never increases rank.
LowRankBlock recompress(const LowRankBlock& block, double tol);

/// Truncated SVD of a dense block. Returns a low-rank form only when it
/// stores fewer values than the dense block, else an empty optional-style
/// passthrough signalled by keep_dense.
struct CompressResult {
  bool keep_dense = false;
  LowRankBlock block;
};
CompressResult compress_dense(const MatrixXc& m, double tol);

}  // namespace hefie
