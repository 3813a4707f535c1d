#pragma once

#include <array>
#include <vector>

#include "hefie/geometry.hpp"

namespace hefie {

/// Quadrature on the reference triangle in barycentric coordinates.
/// Weights are normalized to sum to 1 (unit reference area).
struct QuadratureRule {
  struct Point {
    double l0, l1, l2;  // barycentric
    double weight;
  };
  std::vector<Point> points;
  int degree = 0;  // exact for polynomials up to this degree

  static const QuadratureRule& centroid();   // 1 point, degree 1
  static const QuadratureRule& order3();     // 3 points, degree 2
  static const QuadratureRule& order7();     // 7 points, degree 5
  static const QuadratureRule& order13();    // 13 points, degree 7
};

/// Maps a barycentric quadrature point onto a physical triangle.
inline Vec3 map_point(const QuadratureRule::Point& p, const Vec3& a,
                      const Vec3& b, const Vec3& c) {
  return p.l0 * a + p.l1 * b + p.l2 * c;
}

}  // namespace hefie
