#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "hefie/mesh.hpp"
#include "hefie/rwg.hpp"

using namespace hefie;

namespace {
constexpr double kFreq = 1e9;
}

TEST_SUITE("mesh") {

TEST_CASE("plate counts") {
  const TriangleMesh m = generate_plate(1.0, 1.0, 10, kFreq);
  CHECK(m.triangles.size() == 200);
  CHECK(m.vertices.size() == 121);
  validate_mesh(m);
  const RwgBasis basis = build_rwg(m);
  // interior edges of a 10 x 10 structured grid
  CHECK(basis.size() == 280);
}

TEST_CASE("plate area and centering") {
  const TriangleMesh m = generate_plate(2.0, 1.5, 8, kFreq);
  const double lam = wavelength(kFreq);
  CHECK(m.total_area() == doctest::Approx(2.0 * 1.5 * lam * lam).epsilon(1e-12));
  Vec3 lo = m.vertices[0], hi = m.vertices[0];
  for (const Vec3& v : m.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  CHECK((lo + hi).norm() < 1e-12 * lam);
}

TEST_CASE("five wavelength plate size") {
  const TriangleMesh m = generate_plate(5.0, 5.0, 9, kFreq);
  const RwgBasis basis = build_rwg(m);
  CHECK(basis.size() == 5985);
}

TEST_CASE("plate input validation") {
  CHECK_THROWS_AS(generate_plate(0.0, 1.0, 10, kFreq), MeshError);
  CHECK_THROWS_AS(generate_plate(1.0, 1.0, 0, kFreq), MeshError);
  CHECK_THROWS_AS(generate_plate(1.0, 1.0, 10, -1.0), MeshError);
}

TEST_CASE("cube is watertight") {
  const TriangleMesh m = generate_cube(1.0, 10, kFreq);
  validate_mesh(m);
  const std::size_t f = m.triangles.size();
  CHECK(f == 1200);
  // every edge shared by exactly two triangles, Euler characteristic 2
  const RwgBasis basis = build_rwg(m);
  const std::size_t e = static_cast<std::size_t>(basis.size());
  CHECK(e == 3 * f / 2);
  CHECK(static_cast<long>(m.vertices.size()) - static_cast<long>(e) +
            static_cast<long>(f) ==
        2);
}

TEST_CASE("icosphere refinement") {
  for (int level = 0; level <= 3; ++level) {
    const TriangleMesh m = generate_sphere(0.5, level, kFreq);
    validate_mesh(m);
    const std::size_t expect = 20u << (2 * level);
    CHECK(m.triangles.size() == expect);
    const RwgBasis basis = build_rwg(m);
    CHECK(basis.size() == static_cast<int>(3 * expect / 2));
    const double r = 0.5 * wavelength(kFreq);
    for (const Vec3& v : m.vertices)
      CHECK(std::abs(v.norm() - r) < 1e-12 * r);
  }
}

TEST_CASE("rwg orientation invariants") {
  const TriangleMesh m = generate_plate(1.0, 1.0, 6, kFreq);
  const RwgBasis basis = build_rwg(m);
  for (const RwgEdge& e : basis.edges) {
    CHECK(e.v0 < e.v1);
    CHECK(e.tri_plus < e.tri_minus);
    const double len = (m.vertices[e.v1] - m.vertices[e.v0]).norm();
    CHECK(e.length == doctest::Approx(len).epsilon(1e-14));
    // free vertices complete their triangles
    for (int t : {e.tri_plus, e.tri_minus}) {
      const auto& tri = m.triangles[t];
      const int fv = t == e.tri_plus ? e.free_plus : e.free_minus;
      CHECK(std::count(tri.begin(), tri.end(), e.v0) == 1);
      CHECK(std::count(tri.begin(), tri.end(), e.v1) == 1);
      CHECK(std::count(tri.begin(), tri.end(), fv) == 1);
    }
  }
}

TEST_CASE("rwg count independent of triangle order") {
  TriangleMesh m = generate_plate(1.0, 1.0, 6, kFreq);
  const RwgBasis before = build_rwg(m);
  std::set<std::pair<int, int>> edges_before;
  for (const RwgEdge& e : before.edges) edges_before.insert({e.v0, e.v1});

  std::mt19937 rng(7);
  std::shuffle(m.triangles.begin(), m.triangles.end(), rng);
  const RwgBasis after = build_rwg(m);
  std::set<std::pair<int, int>> edges_after;
  for (const RwgEdge& e : after.edges) edges_after.insert({e.v0, e.v1});
  CHECK(edges_before == edges_after);
}

TEST_CASE("open edge strip") {
  // single row of cells: boundary edges carry no basis function
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  CHECK(build_rwg(m).size() == 0);

  m.vertices.push_back({1, 1, 0});
  m.triangles.push_back({1, 3, 2});
  CHECK(build_rwg(m).size() == 1);
}

TEST_CASE("validate rejects bad input") {
  TriangleMesh bad;
  bad.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  bad.triangles = {{0, 1, 5}};
  CHECK_THROWS_AS(validate_mesh(bad), MeshError);

  TriangleMesh degenerate;
  degenerate.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  degenerate.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(validate_mesh(degenerate), MeshError);

  TriangleMesh nonmanifold;
  nonmanifold.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                          {0, 0, 1},  {0, -1, 0}};
  nonmanifold.triangles = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
  CHECK_THROWS_AS(build_rwg(nonmanifold), MeshError);
}

TEST_CASE("save and load roundtrip") {
  const TriangleMesh m = generate_sphere(0.5, 1, kFreq);
  const std::string path = "roundtrip_mesh.txt";
  save_mesh(m, path);
  const TriangleMesh back = load_mesh(path);
  REQUIRE(back.vertices.size() == m.vertices.size());
  REQUIRE(back.triangles.size() == m.triangles.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    CHECK((back.vertices[i] - m.vertices[i]).norm() < 1e-9);
  CHECK(back.triangles == m.triangles);
  std::remove(path.c_str());
}

TEST_CASE("load rejects malformed files") {
  CHECK_THROWS(load_mesh("does_not_exist.txt"));
  const std::string path = "malformed_mesh.txt";
  {
    std::ofstream out(path);
    out << "2 3\n0 0 0\n1 0 0\n0 1 0\n0 1 2\n0 1 9\n";
  }
  CHECK_THROWS(load_mesh(path));
  std::remove(path.c_str());
}

}  // TEST_SUITE
