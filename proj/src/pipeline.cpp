#include "hefie/pipeline.hpp"

#include <chrono>
#include <stdexcept>

namespace hefie {

TriangleMesh make_geometry(const ProblemConfig& config) {
  if (config.geometry == "plate")
    return generate_plate(config.size, config.size,
                          config.elements_per_wavelength, config.frequency);
  if (config.geometry == "cube")
    return generate_cube(config.size, config.elements_per_wavelength,
                         config.frequency);
  if (config.geometry == "sphere")
    return generate_sphere(config.size / 2.0, config.sphere_refinement,
                           config.frequency);
  // anything else is a mesh file path
  TriangleMesh mesh = load_mesh(config.geometry);
  if (!mesh.frequency_hint) mesh.frequency_hint = config.frequency;
  return mesh;
}

std::unique_ptr<Problem> build_problem(const ProblemConfig& config) {
  return build_problem(make_geometry(config), config);
}

std::unique_ptr<Problem> build_problem(TriangleMesh mesh,
                                       const ProblemConfig& config) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  auto p = std::make_unique<Problem>();
  p->mesh = std::move(mesh);
  p->basis = build_rwg(p->mesh);
  p->medium = Medium::vacuum(config.frequency);
  p->assembler = std::make_unique<EfieAssembler>(p->basis, p->medium);

  TreeOptions tree_options;
  tree_options.leaf_size = config.leaf_size;
  tree_options.max_level = config.max_level;
  p->tree = build_tree(p->basis, tree_options);
  p->partition = build_partition(p->tree, config.eta);
  p->graph = near_field_graph(p->partition, p->tree.leaf_count());
  p->leaf_order = compute_ordering(p->graph, config.ordering);
  const Layout layout = make_layout(p->tree, p->leaf_order.permutation);

  const auto t0 = clock::now();
  HAssemblyOptions h_options;
  h_options.tol_aca = config.tol_aca;
  p->h = assemble_hmatrix(*p->assembler, p->tree, p->partition, layout,
                          h_options);
  const auto t1 = clock::now();
  p->t_matrix_setup = seconds(t0, t1);

  switch (config.pc) {
    case PreconditionerKind::schur: {
      SchurBuildOptions s;
      s.fill_tol = config.fill_tol;
      p->pre = build_schur(p->h, s);
      break;
    }
    case PreconditionerKind::nullfield:
      p->pre = null_field_build(p->h);
      break;
    case PreconditionerKind::jacobi:
      p->pre = block_jacobi_build(p->h);
      break;
    case PreconditionerKind::none:
      break;
  }
  p->t_pre_setup = config.pc == PreconditionerKind::schur
                       ? p->pre.stats.setup_seconds
                       : seconds(t1, clock::now());

  p->system = PreconditionedSystem::make(
      p->h, config.pc == PreconditionerKind::none ? nullptr : &p->pre,
      config.pc);
  return p;
}

}  // namespace hefie
