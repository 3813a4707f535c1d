#pragma once

#include <span>
#include <vector>

#include "hefie/geometry.hpp"
#include "hefie/quadrature.hpp"
#include "hefie/rwg.hpp"

namespace hefie {

/// Background medium, fixed to vacuum material constants.
struct Medium {
  double frequency;  // Hz
  double omega;      // rad/s
  double wavenumber; // rad/m
  double mu;         // H/m
  double eps;        // F/m

  static Medium vacuum(double frequency);
  double wavelength() const { return 2.0 * constants::pi / wavenumber; }
};

struct PlaneWave {
  Vec3 direction;     // unit propagation direction
  Vec3 polarization;  // unit, orthogonal to direction
  Complex amplitude;  // V/m

  /// throws std::invalid_argument unless |dir| = 1, |pol| = 1 and
  /// dir.pol = 0, all to 1e-12
  static PlaneWave make(const Vec3& direction, const Vec3& polarization,
                        Complex amplitude = Complex(1.0, 0.0));
};

struct AssemblyOptions {
  const QuadratureRule* base_rule = &QuadratureRule::order3();
  const QuadratureRule* near_rule = &QuadratureRule::order7();
  /// triangle pairs closer than near_factor x max diameter (or sharing a
  /// vertex) get the upgraded rule plus analytic 1/R extraction
  double near_factor = 2.0;
  int dense_cap = 6000;
};

/// Galerkin EFIE matrix entries over an RWG basis set.
///
/// Entries are evaluated per triangle pair through the four kernel moments
/// (1, r, r', r.r'), which the four RWG interaction terms share. Touching or
/// close pairs extract the static 1/R kernel analytically and integrate the
/// smooth remainder numerically.
class EfieAssembler {
 public:
  EfieAssembler(const RwgBasis& basis, const Medium& medium,
                AssemblyOptions options = {});

  Complex entry(int i, int j) const;

  /// out(a, b) = entry(rows[a], cols[b]); shared triangle-pair moments are
  /// computed once per call
  void assemble_block(std::span<const int> rows, std::span<const int> cols,
                      MatrixXc& out) const;

  /// Full matrix, assembled for i <= j and mirrored (exactly complex
  /// symmetric). Throws std::length_error above the dense cap.
  MatrixXc assemble_dense() const;

  const RwgBasis& basis() const { return *basis_; }
  const Medium& medium() const { return *medium_; }

 private:
  struct PairMoments {
    Complex m0;                // integral G
    Eigen::Vector3cd m_obs;    // integral r G
    Eigen::Vector3cd m_src;    // integral r' G
    Complex m_dot;             // integral (r . r') G
  };
  PairMoments pair_moments(int tri_obs, int tri_src) const;
  bool is_near_pair(int tri_obs, int tri_src) const;

  const RwgBasis* basis_;
  const Medium* medium_;
  AssemblyOptions options_;
  std::vector<double> tri_area_;
  std::vector<double> tri_diameter_;
  std::vector<Vec3> tri_centroid_;
};

/// b_i = integral of f_i . E_inc over the basis support.
VectorXc excitation_vector(const RwgBasis& basis, const PlaneWave& wave,
                           const Medium& medium,
                           const QuadratureRule& rule = QuadratureRule::order7());

/// Radiation vector F(r_hat) with E_scat ~ (e^{-jkr}/r) F.
Eigen::Vector3cd far_field(const VectorXc& currents, const RwgBasis& basis,
                           const Medium& medium, const Vec3& observation_dir);

/// sigma = 4 pi |F|^2 / |E_inc|^2 in dBsm; zero fields floor at -300 dBsm.
double bistatic_rcs_dbsm(const VectorXc& currents, const RwgBasis& basis,
                         const Medium& medium, const Vec3& observation_dir,
                         double incident_amplitude);

std::vector<double> monostatic_rcs(const std::vector<VectorXc>& currents,
                                   const RwgBasis& basis, const Medium& medium,
                                   const std::vector<Vec3>& directions,
                                   double incident_amplitude);

}  // namespace hefie
