#include "hefie/singular.hpp"

#include <cmath>

namespace hefie {

// Edge-by-edge evaluation of the classic closed forms for polygonal static
// potential integrals (Wilton/Rao line-integral reduction).
StaticIntegrals static_potential_integrals(const Vec3& r, const Vec3& a,
                                           const Vec3& b, const Vec3& c) {
  const Vec3 normal = (b - a).cross(c - a).normalized();
  const double d = normal.dot(r - a);
  const Vec3 rho = r - d * normal;
  const double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  const double tiny = 1e-13 * scale;

  const Vec3 corners[3] = {a, b, c};
  double scalar = 0.0;
  Vec3 in_plane = Vec3::Zero();

  for (int e = 0; e < 3; ++e) {
    const Vec3& pm = corners[e];
    const Vec3& pp = corners[(e + 1) % 3];
    const Vec3 s_hat = (pp - pm).normalized();
    const Vec3 m_hat = s_hat.cross(normal);  // outward in-plane normal
    const double p0 = m_hat.dot(pm - rho);
    const double lm = s_hat.dot(pm - rho);
    const double lp = s_hat.dot(pp - rho);
    const double r0_sq = p0 * p0 + d * d;
    const double rm = std::sqrt(r0_sq + lm * lm);
    const double rp = std::sqrt(r0_sq + lp * lp);

    // observation on the edge line: both terms vanish in the limit
    if (r0_sq < tiny * tiny) continue;

    // the two forms are algebraically equal; pick the one whose
    // denominator stays away from zero
    double log_term;
    if (lm + lp >= 0.0)
      log_term = std::log((rp + lp) / (rm + lm));
    else
      log_term = std::log((rm - lm) / (rp - lp));

    scalar += p0 * log_term;
    if (std::abs(d) > 0.0) {
      const double ad = std::abs(d);
      scalar -= ad * (std::atan2(p0 * lp, r0_sq + ad * rp) -
                      std::atan2(p0 * lm, r0_sq + ad * rm));
    }
    in_plane += 0.5 * (r0_sq * log_term + lp * rp - lm * rm) * m_hat;
  }
  return {scalar, in_plane, rho};
}

}  // namespace hefie
