// Experiment driver: meshes, solves, scaling ladders, preconditioner
// comparisons, sparsity-pattern dumps and eigenvalue scatters, all as CSV.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "hefie/pipeline.hpp"

using namespace hefie;
namespace fs = std::filesystem;

namespace {

struct CliConfig {
  ProblemConfig problem;
  double freq_ghz = 1.0;
  double gmres_tol = 1e-6;
  int restart = 0;
  int max_iter = 2000;
  std::string out_dir = ".";
  long seed = 0;
  int sweep = 1;           // monostatic incidence count (solve)
  int rhs = 1;             // right-hand sides per variant (compare)
  std::vector<double> sizes{2.0, 3.0, 4.0, 6.0, 8.0};  // ladder, wavelengths
  std::string ordering = "sloan";
  std::string pc = "schur";

  void finalize() {
    problem.frequency = freq_ghz * 1e9;
    problem.ordering = ordering_from_string(ordering);
    problem.pc = preconditioner_from_string(pc);
    if (problem.tol_aca <= 0.0 || gmres_tol <= 0.0)
      throw std::invalid_argument("tolerances must be positive");
    if (problem.fill_tol < 0.0)
      throw std::invalid_argument("fill tolerance must be non-negative");
  }

  std::string echo() const {
    std::ostringstream os;
    os << "# geometry=" << problem.geometry << "\n"
       << "# size=" << problem.size << "\n"
       << "# epw=" << problem.elements_per_wavelength << "\n"
       << "# sphere-refine=" << problem.sphere_refinement << "\n"
       << "# freq-ghz=" << freq_ghz << "\n"
       << "# leaf-size=" << problem.leaf_size << "\n"
       << "# max-level=" << problem.max_level << "\n"
       << "# eta=" << problem.eta << "\n"
       << "# tol-aca=" << problem.tol_aca << "\n"
       << "# fill-tol=" << problem.fill_tol << "\n"
       << "# ordering=" << ordering << "\n"
       << "# pc=" << pc << "\n"
       << "# gmres-tol=" << gmres_tol << "\n"
       << "# restart=" << restart << "\n"
       << "# max-iter=" << max_iter << "\n"
       << "# seed=" << seed << "\n";
    return os.str();
  }
};

// temp + rename so readers never see a partial file
void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

double median_phase_seconds(const std::function<void()>& phase, int min_runs = 3) {
  using clock = std::chrono::steady_clock;
  std::vector<double> samples;
  for (int i = 0; i < min_runs; ++i) {
    const auto t0 = clock::now();
    phase();
    samples.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

struct PhaseTimes {
  double t_mm = 0.0;   // far-field matvec
  double t_mpp = 0.0;  // diagonal block solves
  double t_mps = 0.0;  // left + right scaling applications
};

PhaseTimes measure_phases(const Problem& p) {
  PhaseTimes t;
  const VectorXc x = VectorXc::Random(p.size());
  VectorXc sink;
  t.t_mm = median_phase_seconds([&] { sink = p.h.far_matvec_permuted(x); });
  if (p.system.pre) {
    const SchurPreconditioner& pre = *p.system.pre;
    t.t_mpp = median_phase_seconds([&] { sink = pre.solve_diag(x); });
    if (!pre.steps.empty())
      t.t_mps = median_phase_seconds(
          [&] { sink = pre.apply_left(pre.apply_right(x)); });
  }
  return t;
}

VectorXc incidence_rhs(const Problem& p, double angle_deg) {
  const double a = angle_deg * constants::pi / 180.0;
  // propagation toward the target from the (sin a, 0, cos a) direction
  const Vec3 d(-std::sin(a), 0.0, -std::cos(a));
  const Vec3 pol = Vec3(std::cos(a), 0.0, -std::sin(a));
  return excitation_vector(p.basis, PlaneWave::make(d, pol), p.medium);
}

int cmd_generate(const CliConfig& cfg) {
  TriangleMesh mesh = make_geometry(cfg.problem);
  const fs::path out = fs::path(cfg.out_dir) / "mesh.txt";
  fs::create_directories(cfg.out_dir);
  save_mesh(mesh, out.string());
  std::printf("wrote %s: %zu vertices, %zu triangles\n", out.string().c_str(),
              mesh.vertices.size(), mesh.triangles.size());
  return 0;
}

int cmd_solve(const CliConfig& cfg) {
  auto p = build_problem(cfg.problem);
  GmresOptions gopt;
  gopt.tol = cfg.gmres_tol;
  gopt.restart = cfg.restart;
  gopt.max_iter = cfg.max_iter;

  std::ostringstream report, rcs;
  report << cfg.echo()
         << "angle_deg,iterations,converged,t_solve,original_residual\n";
  rcs << cfg.echo() << "phi_deg,sigma_dbsm\n";

  std::vector<VectorXc> currents;
  std::vector<Vec3> directions;
  bool all_converged = true;
  using clock = std::chrono::steady_clock;
  for (int s = 0; s < cfg.sweep; ++s) {
    const double angle =
        cfg.sweep > 1 ? 90.0 * s / (cfg.sweep - 1) : 0.0;
    const VectorXc b = incidence_rhs(*p, angle);
    const auto t0 = clock::now();
    auto [x, rep] = solve_system(p->system, b, gopt);
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();
    all_converged = all_converged && rep.converged;
    report << angle << ',' << rep.iterations << ',' << (rep.converged ? 1 : 0)
           << ',' << dt << ',' << rep.original_residual << '\n';
    const double a = angle * constants::pi / 180.0;
    directions.emplace_back(std::sin(a), 0.0, std::cos(a));  // back toward src
    currents.push_back(std::move(x));
  }
  for (std::size_t s = 0; s < currents.size(); ++s) {
    const double angle = cfg.sweep > 1 ? 90.0 * s / (cfg.sweep - 1) : 0.0;
    rcs << angle << ','
        << bistatic_rcs_dbsm(currents[s], p->basis, p->medium, directions[s],
                             1.0)
        << '\n';
  }
  write_atomic(fs::path(cfg.out_dir) / "solve_report.csv", report.str());
  write_atomic(fs::path(cfg.out_dir) / "rcs.csv", rcs.str());
  std::printf("N=%d, %d rhs, reports in %s\n", p->size(), cfg.sweep,
              cfg.out_dir.c_str());
  return all_converged ? 0 : 2;
}

// least-squares slope of log(y) vs log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-12));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_scaling(const CliConfig& cfg) {
  std::ostringstream bench;
  bench << cfg.echo()
        << "N,t_sm,t_sp,p,t_mm,t_mpp,t_mps,nnz_scaling,fillin_blocks,"
           "memory_bytes,t_total\n";
  std::vector<double> ns, tsp, tmps, mem;
  bool all_converged = true;
  for (double size : cfg.sizes) {
    ProblemConfig pc = cfg.problem;
    pc.size = size;
    auto p = build_problem(pc);
    GmresOptions gopt;
    gopt.tol = cfg.gmres_tol;
    gopt.restart = cfg.restart;
    gopt.max_iter = cfg.max_iter;
    const VectorXc b = incidence_rhs(*p, 0.0);
    auto [x, rep] = solve_system(p->system, b, gopt);
    all_converged = all_converged && rep.converged;
    const PhaseTimes pt = measure_phases(*p);
    const std::size_t memory = p->pre.stats.nnz * sizeof(Complex);
    const double t_total = p->t_matrix_setup + p->t_pre_setup +
                           rep.iterations * (pt.t_mm + pt.t_mpp + pt.t_mps);
    bench << p->size() << ',' << p->t_matrix_setup << ',' << p->t_pre_setup
          << ',' << rep.iterations << ',' << pt.t_mm << ',' << pt.t_mpp << ','
          << pt.t_mps << ',' << p->pre.stats.nnz << ','
          << p->pre.stats.fill_in_blocks << ',' << memory << ',' << t_total
          << '\n';
    ns.push_back(p->size());
    tsp.push_back(p->t_pre_setup);
    tmps.push_back(pt.t_mps + pt.t_mpp);
    mem.push_back(static_cast<double>(memory));
    std::printf("size=%.1f N=%d p=%d t_sp=%.2fs nnz=%zu\n", size, p->size(),
                rep.iterations, p->t_pre_setup, p->pre.stats.nnz);
  }
  write_atomic(fs::path(cfg.out_dir) / "bench.csv", bench.str());

  std::ostringstream slopes;
  slopes << cfg.echo() << "quantity,slope,points,low_confidence\n";
  const int pts = static_cast<int>(ns.size());
  const int low = pts < 3 ? 1 : 0;
  slopes << "t_sp," << loglog_slope(ns, tsp) << ',' << pts << ',' << low << '\n'
         << "t_mps," << loglog_slope(ns, tmps) << ',' << pts << ',' << low
         << '\n'
         << "memory," << loglog_slope(ns, mem) << ',' << pts << ',' << low
         << '\n';
  write_atomic(fs::path(cfg.out_dir) / "slopes.csv", slopes.str());
  std::printf("slopes: t_sp=%.2f t_mps=%.2f memory=%.2f\n",
              loglog_slope(ns, tsp), loglog_slope(ns, tmps),
              loglog_slope(ns, mem));
  return all_converged ? 0 : 2;
}

int cmd_compare(const CliConfig& cfg) {
  const char* kinds[] = {"schur", "nullfield", "jacobi", "none"};
  std::ostringstream out;
  out << cfg.echo()
      << "pc,N,rhs,p_avg,t_sp,t_mm,t_mpp,t_mps,t_solve,t_total,"
         "speedup_vs_schur\n";
  double t_total_schur = -1.0;
  std::vector<std::string> rows;
  std::vector<double> totals;
  bool all_converged = true;
  using clock = std::chrono::steady_clock;
  for (const char* kind : kinds) {
    ProblemConfig pc = cfg.problem;
    pc.pc = preconditioner_from_string(kind);
    auto p = build_problem(pc);
    GmresOptions gopt;
    gopt.tol = cfg.gmres_tol;
    gopt.restart = cfg.restart;
    gopt.max_iter = cfg.max_iter;
    long iter_sum = 0;
    double t_solve = 0.0;
    for (int s = 0; s < cfg.rhs; ++s) {
      const double angle = cfg.rhs > 1 ? 90.0 * s / (cfg.rhs - 1) : 0.0;
      const VectorXc b = incidence_rhs(*p, angle);
      const auto t0 = clock::now();
      auto [x, rep] = solve_system(p->system, b, gopt);
      t_solve += std::chrono::duration<double>(clock::now() - t0).count();
      iter_sum += rep.iterations;
      all_converged = all_converged && rep.converged;
    }
    const PhaseTimes pt = measure_phases(*p);
    const double t_total = p->t_matrix_setup + p->t_pre_setup + t_solve;
    if (std::string(kind) == "schur") t_total_schur = t_total;
    std::ostringstream row;
    row << kind << ',' << p->size() << ',' << cfg.rhs << ','
        << double(iter_sum) / cfg.rhs << ',' << p->t_pre_setup << ','
        << pt.t_mm << ',' << pt.t_mpp << ',' << pt.t_mps << ',' << t_solve
        << ',' << t_total;
    rows.push_back(row.str());
    totals.push_back(t_total);
    std::printf("%-10s p_avg=%.1f t_sp=%.2fs t_solve=%.2fs t_total=%.2fs\n",
                kind, double(iter_sum) / cfg.rhs, p->t_pre_setup, t_solve,
                t_total);
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << rows[i] << ',' << totals[i] / t_total_schur << '\n';
  write_atomic(fs::path(cfg.out_dir) / "compare.csv", out.str());
  return all_converged ? 0 : 2;
}

int cmd_pattern(const CliConfig& cfg) {
  auto p = build_problem(cfg.problem);

  // partition blocks in the cluster dump format
  std::ostringstream blocks;
  for (const auto& nb : p->partition.near_blocks) {
    const ClusterNode& t = p->tree.nodes[p->tree.leaves[nb.t_leaf]];
    const ClusterNode& s = p->tree.nodes[p->tree.leaves[nb.s_leaf]];
    blocks << nb.t_leaf << ' ' << nb.s_leaf << " near " << t.level << ' '
           << t.bases.size() << ' ' << s.bases.size() << '\n';
  }
  for (const auto& fb : p->partition.far_blocks) {
    const ClusterNode& t = p->tree.nodes[fb.t_node];
    const ClusterNode& s = p->tree.nodes[fb.s_node];
    blocks << fb.t_node << ' ' << fb.s_node << " far " << fb.level << ' '
           << t.bases.size() << ' ' << s.bases.size() << '\n';
  }
  write_atomic(fs::path(cfg.out_dir) / "pattern_blocks.txt", blocks.str());

  // stored scaling coefficients: diagonal identity plus alpha blocks
  std::ostringstream scal;
  for (const ScalingStep& step : p->pre.steps) {
    const int mk = p->pre.offsets[step.pivot + 1] - p->pre.offsets[step.pivot];
    scal << step.pivot << ' ' << step.pivot << " diag " << mk << ' ' << mk
         << ' ' << mk << '\n';
    for (const auto& [j, alpha] : step.coeffs)
      scal << step.pivot << ' ' << j << (alpha.fill_in ? " fill " : " alpha ")
           << alpha.rows() << ' ' << alpha.cols() << ' '
           << alpha.stored_values() << '\n';
  }
  write_atomic(fs::path(cfg.out_dir) / "pattern_scaling.txt", scal.str());

  std::ostringstream summary;
  summary << cfg.echo()
          << "ordering,near_blocks,far_blocks,nnz_scaling,fillin_blocks\n"
          << cfg.ordering << ',' << p->partition.near_blocks.size() << ','
          << p->partition.far_blocks.size() << ',' << p->pre.stats.nnz << ','
          << p->pre.stats.fill_in_blocks << '\n';
  write_atomic(fs::path(cfg.out_dir) / "pattern_summary.csv", summary.str());
  std::printf("N=%d near=%zu far=%zu nnz=%zu fills=%zu\n", p->size(),
              p->partition.near_blocks.size(), p->partition.far_blocks.size(),
              p->pre.stats.nnz, p->pre.stats.fill_in_blocks);
  return 0;
}

int cmd_eig(const CliConfig& cfg) {
  auto p = build_problem(cfg.problem);
  if (p->size() > 4000)
    throw std::invalid_argument("eig needs a dense matrix; keep N <= 4000");
  const MatrixXc z = p->assembler->assemble_dense();
  const EigenDiagnostic diag = eigen_diagnostic(z, p->system);
  std::ostringstream out;
  out << cfg.echo() << "re,im,tag\n";
  for (int i = 0; i < diag.eigs_before.size(); ++i)
    out << diag.eigs_before(i).real() << ',' << diag.eigs_before(i).imag()
        << ",before\n";
  for (int i = 0; i < diag.eigs_after.size(); ++i)
    out << diag.eigs_after(i).real() << ',' << diag.eigs_after(i).imag()
        << ",after\n";
  write_atomic(fs::path(cfg.out_dir) / "eigenvalues.csv", out.str());
  std::printf("spread before=%.3e after=%.3e ratio=%.3e\n", diag.spread_before,
              diag.spread_after, diag.spread_after / diag.spread_before);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-matrix EFIE solver benchmarks"};
  app.require_subcommand(1);
  CliConfig cfg;

  app.set_config("--config")->configurable(false);
  app.add_option("--geometry", cfg.problem.geometry,
                 "plate | cube | sphere | mesh file path");
  app.add_option("--size", cfg.problem.size, "object size in wavelengths");
  app.add_option("--epw", cfg.problem.elements_per_wavelength,
                 "mesh cells per wavelength");
  app.add_option("--sphere-refine", cfg.problem.sphere_refinement,
                 "icosphere refinement level");
  app.add_option("--freq-ghz", cfg.freq_ghz, "frequency in GHz");
  app.add_option("--leaf-size", cfg.problem.leaf_size, "octree leaf size");
  app.add_option("--max-level", cfg.problem.max_level,
                 "octree depth cap, -1 = unlimited");
  app.add_option("--eta", cfg.problem.eta, "admissibility parameter");
  app.add_option("--tol-aca", cfg.problem.tol_aca, "ACA tolerance");
  app.add_option("--fill-tol", cfg.problem.fill_tol,
                 "fill-in compression tolerance, 0 = exact");
  app.add_option("--ordering", cfg.ordering, "none | cm | rcm | king | sloan");
  app.add_option("--pc", cfg.pc, "schur | nullfield | jacobi | none");
  app.add_option("--gmres-tol", cfg.gmres_tol, "GMRES relative tolerance");
  app.add_option("--restart", cfg.restart, "GMRES restart, 0 = full");
  app.add_option("--max-iter", cfg.max_iter, "GMRES iteration cap");
  app.add_option("--out-dir", cfg.out_dir, "output directory");
  app.add_option("--seed", cfg.seed, "random seed (echoed into reports)");
  app.add_option("--sweep", cfg.sweep, "monostatic incidence count (solve)");
  app.add_option("--rhs", cfg.rhs, "right-hand sides per variant (compare)");
  app.add_option("--sizes", cfg.sizes, "size ladder in wavelengths (scaling)");

  auto* generate = app.add_subcommand("generate", "write a mesh file");
  auto* solve = app.add_subcommand("solve", "solve and report RCS");
  auto* scaling = app.add_subcommand("scaling", "size ladder, complexity slopes");
  auto* compare = app.add_subcommand("compare", "preconditioner comparison");
  auto* pattern = app.add_subcommand("pattern", "sparsity pattern dumps");
  auto* eig = app.add_subcommand("eig", "eigenvalue scatter, dense");
  for (auto* sub : {generate, solve, scaling, compare, pattern, eig})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    cfg.finalize();
    if (generate->parsed()) return cmd_generate(cfg);
    if (solve->parsed()) return cmd_solve(cfg);
    if (scaling->parsed()) return cmd_scaling(cfg);
    if (compare->parsed()) return cmd_compare(cfg);
    if (pattern->parsed()) return cmd_pattern(cfg);
    if (eig->parsed()) return cmd_eig(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
