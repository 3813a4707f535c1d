#pragma once

#include <array>

#include "hefie/geometry.hpp"

namespace hefie {

/// Analytic static potential integrals over a triangle T for an observation
/// point r (anywhere in space):
///   scalar   = \int_T 1/R dA'
///   in_plane = \int_T (r' - rho)/R dA'   with rho = projection of r on T
struct StaticIntegrals {
  double scalar;
  Vec3 in_plane;
  Vec3 projection;  // rho
};

StaticIntegrals static_potential_integrals(const Vec3& r, const Vec3& a,
                                           const Vec3& b, const Vec3& c);

}  // namespace hefie
