#pragma once

#include <Eigen/LU>
#include <map>

#include "hefie/hmatrix.hpp"

namespace hefie {

/// Dense-or-factored block used in the elimination state and the stored
/// scaling coefficients.
struct SchurBlock {
  bool lowrank = false;
  bool fill_in = false;  // position absent from the original near pattern
  MatrixXc dense;
  LowRankBlock lr;

  int rows() const { return lowrank ? lr.rows() : static_cast<int>(dense.rows()); }
  int cols() const { return lowrank ? lr.cols() : static_cast<int>(dense.cols()); }
  MatrixXc materialize() const { return lowrank ? lr.materialize() : dense; }
  VectorXc apply(const VectorXc& x) const;
  VectorXc apply_transpose(const VectorXc& x) const;
  std::size_t stored_values() const;
};

/// Right scaling coefficients of one elimination step: alpha_kj for live
/// j > k. The left coefficient is never stored; it is the transpose.
struct ScalingStep {
  int pivot;
  std::vector<std::pair<int, SchurBlock>> coeffs;  // sorted by j
};

struct SchurStats {
  std::size_t fill_in_blocks = 0;   // distinct fill positions created
  std::size_t nnz = 0;              // stored scaling-coefficient values
  std::size_t dense_fallbacks = 0;  // fill blocks kept dense (rank too high)
  std::size_t block_solves = 0;     // alpha computations (one per block)
  double setup_seconds = 0.0;
};

class SchurPreconditioner {
 public:
  std::vector<ScalingStep> steps;
  std::vector<MatrixXc> diag;                      // scaled diagonal blocks
  std::vector<Eigen::PartialPivLU<MatrixXc>> diag_lu;
  std::vector<int> offsets;                        // leaf offsets, size K+1
  double fill_tol = 0.0;
  SchurStats stats;

  int leaf_count() const { return static_cast<int>(diag.size()); }
  int size() const { return offsets.empty() ? 0 : offsets.back(); }

  /// x = alpha_1(alpha_2(...(alpha_K x))), Eq.-24 style recovery
  VectorXc apply_right(const VectorXc& x) const;
  /// b~ = alpha'_K ... alpha'_1 b with alpha'_k = alpha_k^T
  VectorXc apply_left(const VectorXc& x) const;
  VectorXc solve_diag(const VectorXc& y) const;

  /// column-block version of apply_right: X <- alpha_1 ... alpha_K X
  void apply_right_matrix(MatrixXc& x) const;
};

struct SchurBuildOptions {
  double fill_tol = 1e-2;
  /// null-field baseline: drop updates outside the original near pattern
  bool drop_fill_ins = false;
};

/// Sequential symmetric block elimination over the layout leaf order.
/// Throws std::runtime_error on a singular pivot block.
SchurPreconditioner build_schur(const HOperator& h, SchurBuildOptions options = {});

/// Baseline: same loop with fill-ins dropped (right-sided scaling quality).
SchurPreconditioner null_field_build(const HOperator& h);

/// Baseline: factorized raw diagonal blocks, no scaling steps.
SchurPreconditioner block_jacobi_build(const HOperator& h);

/// Dense R^T Z_N R with R the materialized right scaling product; exact
/// block-diagonality check lives on top of this (small N only).
MatrixXc scaled_near_dense(const HOperator& h, const SchurPreconditioner& pre);

}  // namespace hefie
