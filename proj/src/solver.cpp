#include "hefie/solver.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <stdexcept>

namespace hefie {

PreconditionerKind preconditioner_from_string(const std::string& name) {
  if (name == "schur") return PreconditionerKind::schur;
  if (name == "nullfield") return PreconditionerKind::nullfield;
  if (name == "jacobi") return PreconditionerKind::jacobi;
  if (name == "none") return PreconditionerKind::none;
  throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

std::string to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::schur: return "schur";
    case PreconditionerKind::nullfield: return "nullfield";
    case PreconditionerKind::jacobi: return "jacobi";
    case PreconditionerKind::none: return "none";
  }
  return "none";
}

PreconditionedSystem PreconditionedSystem::make(const HOperator& h,
                                                const SchurPreconditioner* pre,
                                                PreconditionerKind kind) {
  if (kind != PreconditionerKind::none && !pre)
    throw std::invalid_argument("preconditioner data missing for kind " +
                                to_string(kind));
  PreconditionedSystem sys;
  sys.h = &h;
  if (kind == PreconditionerKind::none) {
    sys.pre = nullptr;
    sys.mode = Mode::plain_left;
  } else {
    sys.pre = pre;
    sys.mode = kind == PreconditionerKind::schur ? Mode::schur_scaled
                                                 : Mode::plain_left;
  }
  return sys;
}

VectorXc PreconditionedSystem::apply_operator(const VectorXc& x) const {
  if (mode == Mode::schur_scaled) {
    // x + Z~_N^{-1} alpha'(Z_F(alpha x)); the scaled near-field product
    // collapses to the identity after the diagonal solve
    const VectorXc g =
        pre->apply_left(h->far_matvec_permuted(pre->apply_right(x)));
    return x + pre->solve_diag(g);
  }
  // one-sided (left) scaling: M^{-1} = Z~^{-1} alpha'; alpha' is the
  // identity when there are no scaling steps (block-Jacobi)
  VectorXc y = h->matvec_permuted(x);
  if (pre) y = pre->solve_diag(pre->apply_left(y));
  return y;
}

VectorXc PreconditionedSystem::prepare_rhs(const VectorXc& b) const {
  if (pre) return pre->solve_diag(pre->apply_left(b));
  return b;
}

VectorXc PreconditionedSystem::recover_solution(const VectorXc& x_tilde) const {
  if (mode == Mode::schur_scaled) return pre->apply_right(x_tilde);
  return x_tilde;
}

std::pair<VectorXc, SolveReport> gmres(
    const std::function<VectorXc(const VectorXc&)>& op, const VectorXc& b,
    GmresOptions options) {
  const int n = static_cast<int>(b.size());
  const double bnorm = b.norm();
  SolveReport report;
  VectorXc x = VectorXc::Zero(n);
  if (bnorm == 0.0) {
    report.converged = true;
    report.residual_history.push_back(0.0);
    return {x, report};
  }

  const int m = options.restart > 0 ? options.restart : options.max_iter;
  int total = 0;
  bool first_cycle = true;

  while (total < options.max_iter && !report.converged) {
    const VectorXc r = first_cycle ? b : VectorXc(b - op(x));
    first_cycle = false;
    const double beta = r.norm();
    if (report.residual_history.empty())
      report.residual_history.push_back(beta / bnorm);
    if (beta / bnorm <= options.tol) {
      report.converged = true;
      break;
    }

    const int cycle = std::min(m, options.max_iter - total);
    MatrixXc V(n, cycle + 1);
    MatrixXc H = MatrixXc::Zero(cycle + 1, cycle);
    VectorXc cs(cycle), sn(cycle);
    VectorXc g = VectorXc::Zero(cycle + 1);
    V.col(0) = r / beta;
    g(0) = beta;

    int j = 0;
    for (; j < cycle; ++j) {
      VectorXc w = op(V.col(j));
      // modified Gram-Schmidt with one reorthogonalization pass
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const Complex hij = V.col(i).dot(w);
          H(i, j) += hij;
          w -= hij * V.col(i);
        }
      const double hnext = w.norm();
      H(j + 1, j) = hnext;
      if (hnext > 0.0) V.col(j + 1) = w / hnext;

      for (int i = 0; i < j; ++i) {
        const Complex t =
            std::conj(cs(i)) * H(i, j) + std::conj(sn(i)) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom =
          std::sqrt(std::norm(H(j, j)) + std::norm(H(j + 1, j)));
      if (denom == 0.0) {
        cs(j) = 1.0;
        sn(j) = 0.0;
      } else {
        cs(j) = H(j, j) / denom;
        sn(j) = H(j + 1, j) / denom;
      }
      H(j, j) = std::conj(cs(j)) * H(j, j) + std::conj(sn(j)) * H(j + 1, j);
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = std::conj(cs(j)) * g(j);

      ++total;
      const double rel = std::abs(g(j + 1)) / bnorm;
      report.residual_history.push_back(rel);
      if (rel <= options.tol || hnext == 0.0) {
        report.converged = rel <= options.tol || hnext == 0.0;
        ++j;
        break;
      }
    }

    // back substitution on the leading j x j triangle
    VectorXc y = VectorXc::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      Complex s = g(i);
      for (int l = i + 1; l < j; ++l) s -= H(i, l) * y(l);
      y(i) = s / H(i, i);
    }
    x += V.leftCols(j) * y;

    if (options.restart <= 0) break;  // full GMRES spent its whole budget
  }
  report.iterations = total;
  return {x, report};
}

std::pair<VectorXc, SolveReport> solve_system(const PreconditionedSystem& sys,
                                              const VectorXc& b,
                                              GmresOptions options) {
  const Layout& layout = sys.h->layout;
  const int n = sys.h->size();
  VectorXc b_perm(n);
  for (int p = 0; p < n; ++p) b_perm(p) = b(layout.perm[p]);

  auto op = [&sys](const VectorXc& v) { return sys.apply_operator(v); };
  auto [xt, report] = gmres(op, sys.prepare_rhs(b_perm), options);
  VectorXc x_perm = sys.recover_solution(xt);

  // With compressed fill-ins the scaled diagonal blocks only approximate
  // the true scaled near field, so the inner solve targets a perturbed
  // system. Refinement against the actual operator removes that O(fill_tol)
  // error; each cycle reuses the same preconditioned solve.
  const double bnorm = b_perm.norm();
  for (int cycle = 0; cycle < 10 && report.converged; ++cycle) {
    const VectorXc r = b_perm - sys.h->matvec_permuted(x_perm);
    if (r.norm() <= 10.0 * options.tol * bnorm) break;
    GmresOptions copt = options;
    copt.tol = std::min(0.1, options.tol * bnorm / r.norm());
    auto [ct, crep] = gmres(op, sys.prepare_rhs(r), copt);
    x_perm += sys.recover_solution(ct);
    report.iterations += crep.iterations;
    report.converged = crep.converged;
  }

  VectorXc x(n);
  for (int p = 0; p < n; ++p) x(layout.perm[p]) = x_perm(p);
  report.original_residual = (sys.h->matvec(x) - b).norm() / b.norm();
  return {x, report};
}

VectorXc dense_solve(const MatrixXc& z, const VectorXc& b) {
  return Eigen::PartialPivLU<MatrixXc>(z).solve(b);
}

namespace {
double spread(const VectorXc& eigs) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < eigs.size(); ++i) {
    const double a = std::abs(eigs(i));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}
}  // namespace

EigenDiagnostic eigen_diagnostic(const MatrixXc& z_dense,
                                 const PreconditionedSystem& sys) {
  EigenDiagnostic out;
  Eigen::ComplexEigenSolver<MatrixXc> es(z_dense, false);
  out.eigs_before = es.eigenvalues();
  out.spread_before = spread(out.eigs_before);

  const int n = static_cast<int>(z_dense.rows());
  MatrixXc op(n, n);
  VectorXc e = VectorXc::Zero(n);
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    op.col(j) = sys.apply_operator(e);
    e(j) = 0.0;
  }
  Eigen::ComplexEigenSolver<MatrixXc> es2(op, false);
  out.eigs_after = es2.eigenvalues();
  out.spread_after = spread(out.eigs_after);
  return out;
}

}  // namespace hefie
