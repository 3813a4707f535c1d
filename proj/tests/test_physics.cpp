#include "doctest.h"
#include "hefie/pipeline.hpp"
#include "support/oracles.hpp"

using namespace hefie;

TEST_SUITE("physics") {

TEST_CASE("mie reference approaches the optical limit") {
  const double lambda = constants::c0 / 1e9;
  // ka ~ 100: the backscatter oscillation has decayed to well under 1 dB
  const double radius = 16.0 * lambda;
  const double mie = oracles::mie_backscatter_dbsm(radius, lambda);
  const double limit = oracles::mie_optical_limit_dbsm(radius);
  CHECK(std::abs(mie - limit) < 0.2);
}

TEST_CASE("mie reference is stable in the resonance region") {
  const double lambda = constants::c0 / 1e9;
  // textbook normalized response near ka = 1 stays within the resonance
  // envelope: sigma / (pi a^2) between roughly 0.2 and 3.7
  for (double ka : {0.8, 1.0, 1.5, 2.0}) {
    const double radius = ka * lambda / (2.0 * constants::pi);
    const double mie = oracles::mie_backscatter_dbsm(radius, lambda);
    const double norm =
        mie - 10.0 * std::log10(constants::pi * radius * radius);
    CHECK(norm > -8.0);
    CHECK(norm < 6.0);
  }
}

TEST_CASE("sphere backscatter tracks the mie series") {
  ProblemConfig config;
  config.geometry = "sphere";
  config.size = 1.0;  // one-wavelength diameter
  config.sphere_refinement = 2;
  const auto p = build_problem(config);

  const PlaneWave wave = PlaneWave::make(Vec3(0, 0, -1), Vec3(1, 0, 0));
  const VectorXc b = excitation_vector(p->basis, wave, p->medium);
  auto [x, report] = solve_system(p->system, b, {});
  REQUIRE(report.converged);

  const double solved =
      bistatic_rcs_dbsm(x, p->basis, p->medium, Vec3(0, 0, 1), 1.0);
  const double lambda = p->medium.wavelength();
  const double mie = oracles::mie_backscatter_dbsm(0.5 * lambda, lambda);
  // coarse mesh at this refinement; the fine-mesh check lives in the
  // acceptance suite with a tighter bound
  CHECK(std::abs(solved - mie) < 1.0);
}

}  // TEST_SUITE
