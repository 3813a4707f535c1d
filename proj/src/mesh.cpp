#include "hefie/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hefie {

Vec3 TriangleMesh::triangle_centroid(int t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

double TriangleMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return 0.5 * (vertices[tri[1]] - vertices[tri[0]])
                   .cross(vertices[tri[2]] - vertices[tri[0]])
                   .norm();
}

Vec3 TriangleMesh::triangle_normal(int t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[1]] - vertices[tri[0]])
      .cross(vertices[tri[2]] - vertices[tri[0]])
      .normalized();
}

double TriangleMesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
    a += triangle_area(t);
  return a;
}

void validate_mesh(const TriangleMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const auto& tri : mesh.triangles) {
    for (int idx : tri)
      if (idx < 0 || idx >= nv)
        throw MeshError("triangle references vertex " + std::to_string(idx) +
                        " out of range [0, " + std::to_string(nv) + ")");
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw MeshError("degenerate triangle with repeated vertex");
  }
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
    if (mesh.triangle_area(t) <= 0.0)
      throw MeshError("zero-area triangle " + std::to_string(t));
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  for (const auto& [edge, count] : edge_count)
    if (count > 2)
      throw MeshError("non-manifold edge (" + std::to_string(edge.first) + "," +
                      std::to_string(edge.second) + ") with " +
                      std::to_string(count) + " incident triangles");
}

TriangleMesh generate_plate(double width_wavelengths, double height_wavelengths,
                            int elements_per_wavelength, double frequency) {
  if (width_wavelengths <= 0.0 || height_wavelengths <= 0.0)
    throw MeshError("plate dimensions must be positive");
  if (elements_per_wavelength < 5)
    throw MeshError("elements_per_wavelength must be >= 5");
  const double lam = wavelength(frequency);
  const int nx = std::max(1, static_cast<int>(std::lround(width_wavelengths *
                                                          elements_per_wavelength)));
  const int ny = std::max(1, static_cast<int>(std::lround(height_wavelengths *
                                                          elements_per_wavelength)));
  const double w = width_wavelengths * lam, h = height_wavelengths * lam;
  const double dx = w / nx, dy = h / ny;

  TriangleMesh mesh;
  mesh.frequency_hint = frequency;
  mesh.vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.emplace_back(-0.5 * w + i * dx, -0.5 * h + j * dy, 0.0);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // both triangles split along the (i,j)-(i+1,j+1) diagonal
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  return mesh;
}

TriangleMesh generate_cube(double side_wavelengths, int elements_per_wavelength,
                           double frequency) {
  if (side_wavelengths <= 0.0) throw MeshError("cube side must be positive");
  if (elements_per_wavelength < 5)
    throw MeshError("elements_per_wavelength must be >= 5");
  const double lam = wavelength(frequency);
  const int n = std::max(1, static_cast<int>(std::lround(side_wavelengths *
                                                         elements_per_wavelength)));
  const double s = side_wavelengths * lam;
  const double d = s / n;

  TriangleMesh mesh;
  mesh.frequency_hint = frequency;
  // weld grid points on the cube surface via an integer-coordinate map
  std::map<std::array<int, 3>, int> point_id;
  auto vertex = [&](int i, int j, int k) {
    auto it = point_id.find({i, j, k});
    if (it != point_id.end()) return it->second;
    int id = static_cast<int>(mesh.vertices.size());
    mesh.vertices.emplace_back(-0.5 * s + i * d, -0.5 * s + j * d,
                               -0.5 * s + k * d);
    point_id[{i, j, k}] = id;
    return id;
  };
  // face(u, v, fixed): lattice point for (a, b) on the face; `flip` keeps all
  // normals outward
  auto add_face = [&](auto point_of, bool flip) {
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) {
        int v00 = point_of(a, b), v10 = point_of(a + 1, b);
        int v11 = point_of(a + 1, b + 1), v01 = point_of(a, b + 1);
        if (!flip) {
          mesh.triangles.push_back({v00, v10, v11});
          mesh.triangles.push_back({v00, v11, v01});
        } else {
          mesh.triangles.push_back({v00, v11, v10});
          mesh.triangles.push_back({v00, v01, v11});
        }
      }
  };
  add_face([&](int a, int b) { return vertex(a, b, 0); }, true);   // z = -s/2
  add_face([&](int a, int b) { return vertex(a, b, n); }, false);  // z = +s/2
  add_face([&](int a, int b) { return vertex(a, 0, b); }, false);  // y = -s/2
  add_face([&](int a, int b) { return vertex(a, n, b); }, true);   // y = +s/2
  add_face([&](int a, int b) { return vertex(0, a, b); }, true);   // x = -s/2
  add_face([&](int a, int b) { return vertex(n, a, b); }, false);  // x = +s/2
  return mesh;
}

TriangleMesh generate_sphere(double radius_wavelengths, int refinement_level,
                             double frequency) {
  if (radius_wavelengths <= 0.0) throw MeshError("sphere radius must be positive");
  if (refinement_level < 0) throw MeshError("refinement level must be >= 0");
  const double r = radius_wavelengths * wavelength(frequency);

  TriangleMesh mesh;
  mesh.frequency_hint = frequency;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double coords[12][3] = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& c : coords)
    mesh.vertices.push_back(r * Vec3(c[0], c[1], c[2]).normalized());
  mesh.triangles = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10},
                    {0, 10, 11}, {1, 5, 9},   {5, 11, 4},  {11, 10, 2},
                    {10, 7, 6},  {7, 1, 8},   {3, 9, 4},   {3, 4, 2},
                    {3, 2, 6},   {3, 6, 8},   {3, 8, 9},   {4, 9, 5},
                    {2, 4, 11},  {6, 2, 10},  {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < refinement_level; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int id = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(
          r * (0.5 * (mesh.vertices[a] + mesh.vertices[b])).normalized());
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& tri : mesh.triangles) {
      int ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]),
          ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  return mesh;
}

void save_mesh(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open " + path + " for writing");
  out << mesh.triangles.size() << " " << mesh.vertices.size() << "\n";
  out.precision(17);
  for (const auto& v : mesh.vertices)
    out << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& t : mesh.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  if (!out) throw MeshError("write to " + path + " failed");
}

TriangleMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path);
  auto parse_error = [&](int line, const std::string& what) {
    return MeshError(path + ":" + std::to_string(line) + ": " + what);
  };
  std::string line;
  int lineno = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) throw parse_error(lineno + 1, "unexpected end of file");
    ++lineno;
    return std::istringstream(line);
  };

  auto header = next_line();
  std::size_t ntri = 0, nvert = 0;
  if (!(header >> ntri >> nvert))
    throw parse_error(lineno, "expected header 'ntri nvert'");

  TriangleMesh mesh;
  mesh.vertices.reserve(nvert);
  for (std::size_t i = 0; i < nvert; ++i) {
    auto ls = next_line();
    double x, y, z;
    if (!(ls >> x >> y >> z)) throw parse_error(lineno, "expected 3 vertex coordinates");
    mesh.vertices.emplace_back(x, y, z);
  }
  mesh.triangles.reserve(ntri);
  for (std::size_t i = 0; i < ntri; ++i) {
    auto ls = next_line();
    int a, b, c;
    if (!(ls >> a >> b >> c)) throw parse_error(lineno, "expected 3 vertex indices");
    mesh.triangles.push_back({a, b, c});
  }
  validate_mesh(mesh);
  return mesh;
}

}  // namespace hefie
