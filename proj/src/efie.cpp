#include "hefie/efie.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "hefie/singular.hpp"

namespace hefie {

Medium Medium::vacuum(double frequency) {
  Medium m;
  m.frequency = frequency;
  m.omega = 2.0 * constants::pi * frequency;
  m.mu = constants::mu0;
  m.eps = constants::eps0;
  m.wavenumber = m.omega * std::sqrt(m.mu * m.eps);
  return m;
}

PlaneWave PlaneWave::make(const Vec3& direction, const Vec3& polarization,
                          Complex amplitude) {
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("plane wave direction must be a unit vector");
  if (std::abs(polarization.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("plane wave polarization must be a unit vector");
  if (std::abs(direction.dot(polarization)) > 1e-12)
    throw std::invalid_argument("polarization must be orthogonal to direction");
  return {direction, polarization, amplitude};
}

EfieAssembler::EfieAssembler(const RwgBasis& basis, const Medium& medium,
                             AssemblyOptions options)
    : basis_(&basis), medium_(&medium), options_(options) {
  const TriangleMesh& mesh = *basis.mesh;
  const int nt = static_cast<int>(mesh.triangles.size());
  tri_area_.resize(nt);
  tri_diameter_.resize(nt);
  tri_centroid_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    tri_area_[t] = mesh.triangle_area(t);
    tri_centroid_[t] = mesh.triangle_centroid(t);
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    tri_diameter_[t] =
        std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  }
}

bool EfieAssembler::is_near_pair(int tri_obs, int tri_src) const {
  if (tri_obs == tri_src) return true;
  const auto& ta = basis_->mesh->triangles[tri_obs];
  const auto& tb = basis_->mesh->triangles[tri_src];
  for (int va : ta)
    for (int vb : tb)
      if (va == vb) return true;
  const double dist = (tri_centroid_[tri_obs] - tri_centroid_[tri_src]).norm();
  return dist < options_.near_factor *
                    std::max(tri_diameter_[tri_obs], tri_diameter_[tri_src]);
}

EfieAssembler::PairMoments EfieAssembler::pair_moments(int tri_obs,
                                                       int tri_src) const {
  const TriangleMesh& mesh = *basis_->mesh;
  const double k = medium_->wavenumber;
  const bool near = is_near_pair(tri_obs, tri_src);
  const QuadratureRule& outer = near ? *options_.near_rule : *options_.base_rule;
  const QuadratureRule& inner = near ? *options_.near_rule : *options_.base_rule;

  const auto& to = mesh.triangles[tri_obs];
  const Vec3 oa = mesh.vertices[to[0]], ob = mesh.vertices[to[1]],
             oc = mesh.vertices[to[2]];
  const auto& ts = mesh.triangles[tri_src];
  const Vec3 sa = mesh.vertices[ts[0]], sb = mesh.vertices[ts[1]],
             sc = mesh.vertices[ts[2]];
  const double area_src = tri_area_[tri_src];

  PairMoments m{Complex(0), Eigen::Vector3cd::Zero(), Eigen::Vector3cd::Zero(),
                Complex(0)};
  for (const auto& op : outer.points) {
    const Vec3 r = map_point(op, oa, ob, oc);
    // inner integrals at this observation point: g0 = int G, g1 = int r' G
    Complex g0(0);
    Eigen::Vector3cd g1 = Eigen::Vector3cd::Zero();
    if (!near) {
      for (const auto& ip : inner.points) {
        const Vec3 rp = map_point(ip, sa, sb, sc);
        const double R = (r - rp).norm();
        const Complex g =
            std::exp(Complex(0, -k * R)) / R * (ip.weight * area_src);
        g0 += g;
        g1 += g * rp;
      }
    } else {
      // smooth remainder (e^{-jkR} - 1)/R -> -jk as R -> 0
      for (const auto& ip : inner.points) {
        const Vec3 rp = map_point(ip, sa, sb, sc);
        const double R = (r - rp).norm();
        Complex g;
        if (k * R < 1e-8)
          g = Complex(0, -k);
        else
          g = (std::exp(Complex(0, -k * R)) - 1.0) / R;
        g *= ip.weight * area_src;
        g0 += g;
        g1 += g * rp;
      }
      const StaticIntegrals si = static_potential_integrals(r, sa, sb, sc);
      g0 += si.scalar;
      g1 += (si.in_plane + si.scalar * si.projection).cast<Complex>();
    }
    const double w = op.weight * tri_area_[tri_obs];
    m.m0 += w * g0;
    m.m_obs += (w * g0) * r.cast<Complex>();
    m.m_src += w * g1;
    m.m_dot += w * r.cast<Complex>().dot(g1);  // bilinear: conj(real) = real
  }
  // self pair: m_obs and m_src estimate the same integral through different
  // rules; averaging keeps Z(i,j) == Z(j,i) exactly at the entry level
  if (tri_obs == tri_src) {
    const Eigen::Vector3cd avg = 0.5 * (m.m_obs + m.m_src);
    m.m_obs = avg;
    m.m_src = avg;
  }
  return m;
}

namespace {

struct EdgeSide {
  int tri;
  double sign;
  Vec3 free_vertex;
};

std::array<EdgeSide, 2> edge_sides(const RwgBasis& basis, int n) {
  const RwgEdge& e = basis.edges[n];
  const TriangleMesh& mesh = *basis.mesh;
  return {EdgeSide{e.tri_plus, 1.0, mesh.vertices[e.free_plus]},
          EdgeSide{e.tri_minus, -1.0, mesh.vertices[e.free_minus]}};
}

}  // namespace

Complex EfieAssembler::entry(int i, int j) const {
  int idx[2] = {i, j};
  MatrixXc out(1, 1);
  assemble_block(std::span<const int>(idx, 1), std::span<const int>(idx + 1, 1),
                 out);
  return out(0, 0);
}

void EfieAssembler::assemble_block(std::span<const int> rows,
                                   std::span<const int> cols,
                                   MatrixXc& out) const {
  out.setZero(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(cols.size()));
  const double omega = medium_->omega;
  const Complex j_omega_mu(0, omega * medium_->mu);
  const Complex inv_j_omega_eps = 1.0 / Complex(0, omega * medium_->eps);
  const double inv4pi = 1.0 / (4.0 * constants::pi);

  // moments are computed for the canonical (min, max) triangle pair and
  // transposed on access, which keeps Z(i,j) and Z(j,i) consistent
  std::map<std::pair<int, int>, PairMoments> cache;
  auto moments = [&](int t_obs, int t_src) {
    const bool swap = t_src < t_obs;
    const auto key = swap ? std::make_pair(t_src, t_obs)
                          : std::make_pair(t_obs, t_src);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, pair_moments(key.first, key.second)).first;
    PairMoments m = it->second;
    if (swap) std::swap(m.m_obs, m.m_src);
    return m;
  };

  for (std::size_t a = 0; a < rows.size(); ++a) {
    const auto obs_sides = edge_sides(*basis_, rows[a]);
    const double li = basis_->edges[rows[a]].length;
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const auto src_sides = edge_sides(*basis_, cols[b]);
      const double lj = basis_->edges[cols[b]].length;
      Complex z(0);
      for (const EdgeSide& os : obs_sides) {
        const double ao = tri_area_[os.tri];
        for (const EdgeSide& ss : src_sides) {
          const double as = tri_area_[ss.tri];
          const PairMoments m = moments(os.tri, ss.tri);
          // all dots are bilinear; the real operand goes first so Eigen's
          // conjugation is a no-op
          const Eigen::Vector3cd vi = os.free_vertex.cast<Complex>();
          const Eigen::Vector3cd vj = ss.free_vertex.cast<Complex>();
          const Complex dot_term = m.m_dot - vj.dot(m.m_obs) -
                                   vi.dot(m.m_src) +
                                   os.free_vertex.dot(ss.free_vertex) * m.m0;
          const double sg = os.sign * ss.sign;
          const double scale = li * lj / (ao * as);
          z += sg * scale *
               (j_omega_mu * inv4pi * 0.25 * dot_term +
                inv_j_omega_eps * inv4pi * m.m0);
        }
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = z;
    }
  }
}

MatrixXc EfieAssembler::assemble_dense() const {
  const int n = basis_->size();
  if (n > options_.dense_cap)
    throw std::length_error("dense assembly refused: N = " + std::to_string(n) +
                            " exceeds cap " + std::to_string(options_.dense_cap));
  MatrixXc z(n, n);
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  // assemble the upper triangle row-blockwise, then mirror
  constexpr int chunk = 64;
  for (int r0 = 0; r0 < n; r0 += chunk) {
    const int rn = std::min(chunk, n - r0);
    std::vector<int> rows(all.begin() + r0, all.begin() + r0 + rn);
    std::vector<int> cols(all.begin() + r0, all.end());
    MatrixXc block;
    assemble_block(rows, cols, block);
    z.block(r0, r0, rn, n - r0) = block;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) z(i, j) = z(j, i);
  return z;
}

VectorXc excitation_vector(const RwgBasis& basis, const PlaneWave& wave,
                           const Medium& medium, const QuadratureRule& rule) {
  const TriangleMesh& mesh = *basis.mesh;
  const double k = medium.wavenumber;
  VectorXc b = VectorXc::Zero(basis.size());
  for (int n = 0; n < basis.size(); ++n) {
    const double ln = basis.edges[n].length;
    for (const EdgeSide& side : edge_sides(basis, n)) {
      const auto& tri = mesh.triangles[side.tri];
      const Vec3 ta = mesh.vertices[tri[0]], tb = mesh.vertices[tri[1]],
                 tc = mesh.vertices[tri[2]];
      const double area = mesh.triangle_area(side.tri);
      Complex acc(0);
      for (const auto& p : rule.points) {
        const Vec3 r = map_point(p, ta, tb, tc);
        const Complex phase =
            wave.amplitude * std::exp(Complex(0, -k * wave.direction.dot(r)));
        acc += p.weight * phase * (r - side.free_vertex).dot(wave.polarization);
      }
      b(n) += side.sign * ln / (2.0 * area) * area * acc;
    }
  }
  return b;
}

Eigen::Vector3cd far_field(const VectorXc& currents, const RwgBasis& basis,
                           const Medium& medium, const Vec3& observation_dir) {
  const TriangleMesh& mesh = *basis.mesh;
  const double k = medium.wavenumber;
  const QuadratureRule& rule = QuadratureRule::order7();
  Eigen::Vector3cd radiation = Eigen::Vector3cd::Zero();
  for (int n = 0; n < basis.size(); ++n) {
    if (currents(n) == Complex(0)) continue;
    const double ln = basis.edges[n].length;
    for (const EdgeSide& side : edge_sides(basis, n)) {
      const auto& tri = mesh.triangles[side.tri];
      const Vec3 ta = mesh.vertices[tri[0]], tb = mesh.vertices[tri[1]],
                 tc = mesh.vertices[tri[2]];
      const double area = mesh.triangle_area(side.tri);
      Eigen::Vector3cd acc = Eigen::Vector3cd::Zero();
      for (const auto& p : rule.points) {
        const Vec3 r = map_point(p, ta, tb, tc);
        const Complex phase = std::exp(Complex(0, k * observation_dir.dot(r)));
        acc += (p.weight * phase) * (r - side.free_vertex).cast<Complex>();
      }
      radiation += currents(n) * side.sign * ln / (2.0 * area) * area * acc;
    }
  }
  const Complex coeff(0, -medium.omega * medium.mu / (4.0 * constants::pi));
  const Eigen::Vector3cd projected =
      radiation -
      observation_dir.cast<Complex>() * observation_dir.cast<Complex>().dot(radiation);
  return coeff * projected;
}

double bistatic_rcs_dbsm(const VectorXc& currents, const RwgBasis& basis,
                         const Medium& medium, const Vec3& observation_dir,
                         double incident_amplitude) {
  const Eigen::Vector3cd f = far_field(currents, basis, medium, observation_dir);
  const double sigma = 4.0 * constants::pi * f.squaredNorm() /
                       (incident_amplitude * incident_amplitude);
  if (sigma <= 0.0) return -300.0;
  return std::max(-300.0, 10.0 * std::log10(sigma));
}

std::vector<double> monostatic_rcs(const std::vector<VectorXc>& currents,
                                   const RwgBasis& basis, const Medium& medium,
                                   const std::vector<Vec3>& directions,
                                   double incident_amplitude) {
  std::vector<double> out;
  out.reserve(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i)
    out.push_back(bistatic_rcs_dbsm(currents[i], basis, medium, -directions[i],
                                    incident_amplitude));
  return out;
}

}  // namespace hefie
