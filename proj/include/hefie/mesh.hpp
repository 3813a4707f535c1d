#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hefie/geometry.hpp"

namespace hefie {

/// Triangulated PEC surface. Vertices in meters, triangles as zero-based
/// vertex index triples.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::optional<double> frequency_hint;  // Hz

  Vec3 triangle_centroid(int t) const;
  double triangle_area(int t) const;
  Vec3 triangle_normal(int t) const;  // unit
  double total_area() const;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structured triangulation of a rectangle in the xy-plane, centered at the
/// origin. Dimensions are given in wavelengths at `frequency`. Each grid cell
/// is split along the same diagonal.
TriangleMesh generate_plate(double width_wavelengths, double height_wavelengths,
                            int elements_per_wavelength, double frequency);

/// Closed cube surface of the given side length in wavelengths, centered at
/// the origin. Watertight: shared face-boundary vertices are welded.
TriangleMesh generate_cube(double side_wavelengths, int elements_per_wavelength,
                           double frequency);

/// Icosphere: refinement 0 is the icosahedron (20 triangles), each refinement
/// level quadruples the triangle count; vertices are projected to the radius.
TriangleMesh generate_sphere(double radius_wavelengths, int refinement_level,
                             double frequency);

/// Validates index ranges, triangle areas and (non-)manifoldness.
/// Throws MeshError on structural defects.
void validate_mesh(const TriangleMesh& mesh);

/// Text format: header "ntri nvert", then nvert vertex lines (3 reals),
/// then ntri triangle lines (3 zero-based indices).
void save_mesh(const TriangleMesh& mesh, const std::string& path);
TriangleMesh load_mesh(const std::string& path);

inline double wavelength(double frequency) {
  if (frequency <= 0.0) throw MeshError("frequency must be positive");
  return constants::c0 / frequency;
}

}  // namespace hefie
