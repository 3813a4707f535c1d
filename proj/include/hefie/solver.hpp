#pragma once

#include <functional>

#include "hefie/schur.hpp"

namespace hefie {

enum class PreconditionerKind { schur, nullfield, jacobi, none };
PreconditionerKind preconditioner_from_string(const std::string& name);
std::string to_string(PreconditionerKind kind);

/// Operator actually handed to GMRES.
///   schur_scaled: Eq.-28 composition; the near-field product is replaced
///                 by the scaled diagonal blocks, so the operator is
///                 x + Z~_N^{-1} alpha'(Z_F(alpha x)).
///   plain_left:   M^{-1}(Z_N + Z_F)x with M the block-diagonal factor.
struct PreconditionedSystem {
  enum class Mode { schur_scaled, plain_left };

  const HOperator* h = nullptr;
  const SchurPreconditioner* pre = nullptr;  // null: unpreconditioned
  Mode mode = Mode::plain_left;

  static PreconditionedSystem make(const HOperator& h,
                                   const SchurPreconditioner* pre,
                                   PreconditionerKind kind);

  /// all vectors in the layout (permuted) ordering
  VectorXc apply_operator(const VectorXc& x) const;
  VectorXc prepare_rhs(const VectorXc& b) const;
  VectorXc recover_solution(const VectorXc& x_tilde) const;
};

struct GmresOptions {
  double tol = 1e-6;
  int restart = 0;  // 0: full GMRES
  int max_iter = 2000;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // relative, preconditioned system
  double original_residual = -1.0;       // |Zx - b| / |b|, filled by callers
};

/// Full-orthogonalization GMRES (modified Gram-Schmidt with one
/// reorthogonalization pass) for a generic operator.
std::pair<VectorXc, SolveReport> gmres(
    const std::function<VectorXc(const VectorXc&)>& op, const VectorXc& b,
    GmresOptions options = {});

/// End-to-end solve of Z x = b (original ordering in and out).
std::pair<VectorXc, SolveReport> solve_system(const PreconditionedSystem& sys,
                                              const VectorXc& b,
                                              GmresOptions options = {});

/// Pivoted-LU dense oracle.
VectorXc dense_solve(const MatrixXc& z, const VectorXc& b);

struct EigenDiagnostic {
  VectorXc eigs_before;
  VectorXc eigs_after;
  double spread_before = 0.0;  // max|lambda| / min|lambda|
  double spread_after = 0.0;
};

/// Dense eigenvalues of Z and of the composed preconditioned operator.
EigenDiagnostic eigen_diagnostic(const MatrixXc& z_dense,
                                 const PreconditionedSystem& sys);

}  // namespace hefie
