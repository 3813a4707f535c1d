#include <random>

#include "doctest.h"
#include "hefie/pipeline.hpp"
#include "support/oracles.hpp"

using namespace hefie;

namespace {

VectorXc random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  VectorXc x(n);
  for (int i = 0; i < n; ++i) x(i) = Complex(dist(rng), dist(rng));
  return x;
}

MatrixXc random_spd_like(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  MatrixXc a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return a + 2.0 * n * MatrixXc::Identity(n, n);
}

VectorXc plate_excitation(const Problem& p) {
  const PlaneWave wave = PlaneWave::make(Vec3(0, 0, -1), Vec3(1, 0, 0));
  return excitation_vector(p.basis, wave, p.medium);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("gmres solves the identity in one iteration") {
  const VectorXc b = random_vector(30, 1);
  auto [x, report] = gmres([](const VectorXc& v) { return v; }, b);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  CHECK((x - b).norm() < 1e-12 * b.norm());
}

TEST_CASE("gmres handles a zero right hand side") {
  auto [x, report] =
      gmres([](const VectorXc& v) { return v; }, VectorXc::Zero(10));
  CHECK(report.converged);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("gmres matches a dense direct solve") {
  const MatrixXc a = random_spd_like(60, 2);
  const VectorXc b = random_vector(60, 3);
  GmresOptions opts;
  opts.tol = 1e-10;
  auto [x, report] =
      gmres([&a](const VectorXc& v) { return VectorXc(a * v); }, b, opts);
  CHECK(report.converged);
  CHECK((x - dense_solve(a, b)).norm() < 1e-8 * b.norm());
}

TEST_CASE("residual history is monotone and matches convergence") {
  const MatrixXc a = random_spd_like(80, 4);
  const VectorXc b = random_vector(80, 5);
  auto [x, report] =
      gmres([&a](const VectorXc& v) { return VectorXc(a * v); }, b);
  REQUIRE(!report.residual_history.empty());
  for (std::size_t i = 1; i < report.residual_history.size(); ++i)
    CHECK(report.residual_history[i] <= report.residual_history[i - 1] + 1e-14);
  CHECK(report.residual_history.back() <= 1e-6);
}

TEST_CASE("restarted gmres still converges") {
  const MatrixXc a = random_spd_like(70, 6);
  const VectorXc b = random_vector(70, 7);
  GmresOptions opts;
  opts.restart = 12;
  auto [x, report] =
      gmres([&a](const VectorXc& v) { return VectorXc(a * v); }, b, opts);
  CHECK(report.converged);
  CHECK((a * x - b).norm() <= 1.1e-6 * b.norm());
}

TEST_CASE("iteration budget is honoured") {
  const MatrixXc a = random_spd_like(50, 8) -
                     2.0 * 50 * MatrixXc::Identity(50, 50);  // harder system
  const VectorXc b = random_vector(50, 9);
  GmresOptions opts;
  opts.max_iter = 3;
  auto [x, report] =
      gmres([&a](const VectorXc& v) { return VectorXc(a * v); }, b, opts);
  CHECK(report.iterations <= 3);
}

TEST_CASE("single leaf problems converge immediately") {
  ProblemConfig config;
  config.size = 1.0;
  config.elements_per_wavelength = 6;  // N = 96, one leaf
  const auto p = build_problem(config);
  REQUIRE(p->h.layout.leaf_count() == 1);
  const VectorXc b = plate_excitation(*p);
  auto [x, report] = solve_system(p->system, b, {});
  CHECK(report.converged);
  CHECK(report.iterations <= 1);
  CHECK(report.original_residual <= 1e-10);
  // the preconditioned operator is the identity, so all eigenvalues are 1
  const MatrixXc z = p->assembler->assemble_dense();
  const EigenDiagnostic diag = eigen_diagnostic(z, p->system);
  for (int i = 0; i < diag.eigs_after.size(); ++i)
    CHECK(std::abs(diag.eigs_after(i) - Complex(1.0)) < 1e-10);
}

TEST_CASE("operator composition matches a dense oracle") {
  ProblemConfig config;
  config.size = 2.0;
  config.leaf_size = 60;
  config.fill_tol = 0.0;  // exact elimination for the oracle comparison
  const auto p = build_problem(config);
  const int n = p->size();

  // dense scaled operator: Z~_N^{-1} alpha' Z alpha, with Z reconstructed
  // from the blocks in the permuted frame
  MatrixXc z_perm = MatrixXc::Zero(n, n);
  for (const auto& nb : p->h.near) {
    const int ot = p->h.layout.offsets[nb.t], os = p->h.layout.offsets[nb.s];
    z_perm.block(ot, os, nb.block.rows(), nb.block.cols()) = nb.block;
    if (nb.t != nb.s)
      z_perm.block(os, ot, nb.block.cols(), nb.block.rows()) =
          nb.block.transpose();
  }
  for (int j = 0; j < n; ++j) {
    VectorXc e = VectorXc::Zero(n);
    e(j) = 1.0;
    z_perm.col(j) += p->h.far_matvec_permuted(e);
  }
  MatrixXc r = MatrixXc::Identity(n, n);
  p->pre.apply_right_matrix(r);
  const MatrixXc scaled = r.transpose() * (z_perm * r);

  for (unsigned seed = 0; seed < 3; ++seed) {
    const VectorXc x = random_vector(n, seed);
    const VectorXc lhs = p->system.apply_operator(x);
    const VectorXc rhs = p->pre.solve_diag(scaled * x);
    CHECK((lhs - rhs).norm() < 1e-10 * rhs.norm());
  }
}

TEST_CASE("preconditioned solve matches the dense solution") {
  ProblemConfig config;
  config.size = 2.0;
  const auto p = build_problem(config);
  const VectorXc b = plate_excitation(*p);
  const MatrixXc z = p->assembler->assemble_dense();
  const VectorXc ref = dense_solve(z, b);

  auto [x, report] = solve_system(p->system, b, {});
  CHECK(report.converged);
  CHECK(report.original_residual <= 1e-5);
  CHECK((x - ref).norm() <= 1e-4 * ref.norm());
}

TEST_CASE("all preconditioner variants agree") {
  ProblemConfig config;
  config.size = 2.0;
  std::vector<VectorXc> solutions;
  for (auto pc : {PreconditionerKind::schur, PreconditionerKind::nullfield,
                  PreconditionerKind::jacobi, PreconditionerKind::none}) {
    config.pc = pc;
    const auto p = build_problem(config);
    const VectorXc b = plate_excitation(*p);
    auto [x, report] = solve_system(p->system, b, {});
    CHECK(report.converged);
    CHECK(report.original_residual <= 1e-5);
    solutions.push_back(x);
  }
  for (std::size_t i = 1; i < solutions.size(); ++i)
    CHECK((solutions[i] - solutions[0]).norm() <=
          1e-4 * solutions[0].norm());
}

TEST_CASE("schur beats the unpreconditioned iteration count") {
  for (const char* geometry : {"plate", "cube", "sphere"}) {
    ProblemConfig config;
    config.geometry = geometry;
    config.size = std::string(geometry) == "plate" ? 2.0 : 1.0;
    config.sphere_refinement = 2;
    const auto p = build_problem(config);
    const VectorXc b = plate_excitation(*p);
    auto [x, report] = solve_system(p->system, b, {});

    config.pc = PreconditionerKind::none;
    const auto plain = build_problem(config);
    auto [xp, plain_report] = solve_system(plain->system, b, {});
    REQUIRE(report.converged);
    REQUIRE(plain_report.converged);
    CHECK(report.iterations < plain_report.iterations);
  }
}

TEST_CASE("solution linearity in the right hand side") {
  ProblemConfig config;
  config.size = 2.0;
  const auto p = build_problem(config);
  const VectorXc b = plate_excitation(*p);
  auto [x1, r1] = solve_system(p->system, b, {});
  auto [x2, r2] = solve_system(p->system, VectorXc(2.0 * b), {});
  CHECK((x2 - 2.0 * x1).norm() <= 1e-4 * x2.norm());
}

TEST_CASE("eigenvalue clustering diagnostic") {
  ProblemConfig config;
  config.size = 1.0;
  config.leaf_size = 40;
  config.fill_tol = 0.0;
  const auto p = build_problem(config);
  const MatrixXc z = p->assembler->assemble_dense();
  const EigenDiagnostic diag = eigen_diagnostic(z, p->system);
  CHECK(diag.spread_after < diag.spread_before);
  CHECK(diag.spread_after <= 0.1 * diag.spread_before);
}

TEST_CASE("preconditioner kind strings roundtrip") {
  for (auto kind : {PreconditionerKind::schur, PreconditionerKind::nullfield,
                    PreconditionerKind::jacobi, PreconditionerKind::none})
    CHECK(preconditioner_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(preconditioner_from_string("ilu"), std::invalid_argument);
}

}  // TEST_SUITE
