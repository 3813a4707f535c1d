#pragma once

#include <memory>

#include "hefie/mesh.hpp"
#include "hefie/ordering.hpp"
#include "hefie/solver.hpp"

namespace hefie {

/// One experiment's worth of knobs; shared by the CLI, the bindings and the
/// tests so they all build the same chain.
struct ProblemConfig {
  std::string geometry = "plate";  // plate | cube | sphere | mesh file path
  double size = 2.0;               // wavelengths: plate side, cube edge or
                                   // sphere diameter
  int elements_per_wavelength = 10;
  int sphere_refinement = 3;       // only for geometry == sphere
  double frequency = 1e9;          // Hz

  int leaf_size = 100;
  int max_level = -1;
  double eta = 1.0;
  double tol_aca = 1e-4;
  double fill_tol = 1e-2;
  OrderingAlgorithm ordering = OrderingAlgorithm::sloan;
  PreconditionerKind pc = PreconditionerKind::schur;
};

TriangleMesh make_geometry(const ProblemConfig& config);

/// Fully built solve chain. Members hold pointers into each other, so the
/// problem lives behind a unique_ptr and never moves.
struct Problem {
  TriangleMesh mesh;
  RwgBasis basis;
  Medium medium;
  std::unique_ptr<EfieAssembler> assembler;
  ClusterTree tree;
  BlockPartition partition;
  NearFieldGraph graph;
  LeafOrdering leaf_order;
  HOperator h;
  SchurPreconditioner pre;  // untouched for pc == none
  PreconditionedSystem system;

  double t_matrix_setup = 0.0;  // H-matrix assembly, seconds
  double t_pre_setup = 0.0;     // preconditioner build, seconds

  int size() const { return h.size(); }

  Problem() = default;
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;
};

std::unique_ptr<Problem> build_problem(const ProblemConfig& config);

/// Same chain from an existing mesh (skips make_geometry).
std::unique_ptr<Problem> build_problem(TriangleMesh mesh,
                                       const ProblemConfig& config);

}  // namespace hefie
