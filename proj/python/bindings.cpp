#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hefie/pipeline.hpp"

namespace py = pybind11;
using namespace hefie;

PYBIND11_MODULE(_core, m) {
  m.doc() = "EFIE H-matrix solver with a symmetric near-field Schur "
            "block-diagonal preconditioner";

  py::class_<TriangleMesh>(m, "TriangleMesh")
      .def_readonly("vertices", &TriangleMesh::vertices)
      .def_readonly("triangles", &TriangleMesh::triangles)
      .def("total_area", &TriangleMesh::total_area)
      .def("__len__", [](const TriangleMesh& mesh) { return mesh.triangles.size(); });

  m.def("generate_plate", &generate_plate, py::arg("width_wavelengths"),
        py::arg("height_wavelengths"), py::arg("elements_per_wavelength"),
        py::arg("frequency"));
  m.def("generate_cube", &generate_cube, py::arg("side_wavelengths"),
        py::arg("elements_per_wavelength"), py::arg("frequency"));
  m.def("generate_sphere", &generate_sphere, py::arg("radius_wavelengths"),
        py::arg("refinement_level"), py::arg("frequency"));
  m.def("save_mesh", &save_mesh, py::arg("mesh"), py::arg("path"));
  m.def("load_mesh", &load_mesh, py::arg("path"));

  py::class_<ProblemConfig>(m, "ProblemConfig")
      .def(py::init<>())
      .def_readwrite("geometry", &ProblemConfig::geometry)
      .def_readwrite("size", &ProblemConfig::size)
      .def_readwrite("elements_per_wavelength",
                     &ProblemConfig::elements_per_wavelength)
      .def_readwrite("sphere_refinement", &ProblemConfig::sphere_refinement)
      .def_readwrite("frequency", &ProblemConfig::frequency)
      .def_readwrite("leaf_size", &ProblemConfig::leaf_size)
      .def_readwrite("max_level", &ProblemConfig::max_level)
      .def_readwrite("eta", &ProblemConfig::eta)
      .def_readwrite("tol_aca", &ProblemConfig::tol_aca)
      .def_readwrite("fill_tol", &ProblemConfig::fill_tol)
      .def_property(
          "ordering",
          [](const ProblemConfig& c) { return to_string(c.ordering); },
          [](ProblemConfig& c, const std::string& s) {
            c.ordering = ordering_from_string(s);
          })
      .def_property(
          "preconditioner",
          [](const ProblemConfig& c) { return to_string(c.pc); },
          [](ProblemConfig& c, const std::string& s) {
            c.pc = preconditioner_from_string(s);
          });

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("residual_history", &SolveReport::residual_history)
      .def_readonly("original_residual", &SolveReport::original_residual);

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("size", &Problem::size)
      .def_property_readonly("leaf_count",
                             [](const Problem& p) { return p.tree.leaf_count(); })
      .def_property_readonly("t_matrix_setup",
                             [](const Problem& p) { return p.t_matrix_setup; })
      .def_property_readonly("t_pre_setup",
                             [](const Problem& p) { return p.t_pre_setup; })
      .def_property_readonly(
          "nnz_scaling", [](const Problem& p) { return p.pre.stats.nnz; })
      .def_property_readonly(
          "fill_in_blocks",
          [](const Problem& p) { return p.pre.stats.fill_in_blocks; })
      .def("matvec",
           [](const Problem& p, const VectorXc& x) { return p.h.matvec(x); })
      .def("excitation",
           [](const Problem& p, const Vec3& direction, const Vec3& polarization) {
             return excitation_vector(
                 p.basis, PlaneWave::make(direction.normalized(),
                                          polarization.normalized()),
                 p.medium);
           })
      .def("solve",
           [](const Problem& p, const VectorXc& b, double tol, int max_iter) {
             GmresOptions options;
             options.tol = tol;
             options.max_iter = max_iter;
             return solve_system(p.system, b, options);
           },
           py::arg("b"), py::arg("tol") = 1e-6, py::arg("max_iter") = 2000)
      .def("rcs_dbsm",
           [](const Problem& p, const VectorXc& currents, const Vec3& direction) {
             return bistatic_rcs_dbsm(currents, p.basis, p.medium,
                                      direction.normalized(), 1.0);
           });

  m.def("build_problem",
        [](const ProblemConfig& config) { return build_problem(config); },
        py::arg("config"));
}
