#include "twistlab/grid.hpp"

#include <cmath>
#include <sstream>

#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

void finalize(Mesh &mesh) {
  const int nt = mesh.nt();
  mesh.area.resize(nt);
  mesh.centroid.resize(2, nt);
  mesh.G.resize(nt);
  mesh.total_area = 0;
  mesh.h_mesh = 0;
  for (int t = 0; t < nt; ++t) {
    const auto tri = mesh.tris.col(t);
    const Vec2 p0 = mesh.X.col(tri[0]), p1 = mesh.X.col(tri[1]), p2 = mesh.X.col(tri[2]);
    Mat2 E;
    E.col(0) = p1 - p0;
    E.col(1) = p2 - p0;
    const Real det = E.determinant();
    if (det <= 0) {
      std::ostringstream os;
      os << "triangle " << t << " not CCW (signed area " << det / 2 << ")";
      throw InvalidParams(os.str());
    }
    mesh.area[t] = det / 2;
    mesh.total_area += det / 2;
    mesh.centroid.col(t) = (p0 + p1 + p2) / 3;
    const Mat2 Einv = E.inverse();
    auto &G = mesh.G[t];
    G.row(1) = Einv.row(0);
    G.row(2) = Einv.row(1);
    G.row(0) = -(G.row(1) + G.row(2));
    const Real diam = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    mesh.h_mesh = std::max(mesh.h_mesh, diam);
  }
  mesh.dirichlet = mesh.boundary;
}

Mesh make_square(int n) {
  Mesh mesh;
  mesh.domain = Mesh::Domain::Square;
  mesh.n = n;
  const int nv = (n + 1) * (n + 1);
  mesh.X.resize(2, nv);
  mesh.boundary.assign(nv, 0);
  const Real h = 2.0 / n;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      mesh.X.col(vid(i, j)) = Vec2(-1 + i * h, -1 + j * h);
      if (i == 0 || i == n || j == 0 || j == n) mesh.boundary[vid(i, j)] = 1;
    }
  mesh.tris.resize(3, 2 * n * n);
  int t = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      mesh.tris.col(t++) = Eigen::Vector3i(v00, v10, v11);
      mesh.tris.col(t++) = Eigen::Vector3i(v00, v11, v01);
    }
  finalize(mesh);
  return mesh;
}

Mesh make_disc(int n, Real rho0) {
  Mesh mesh;
  mesh.domain = Mesh::Domain::Disc;
  mesh.rho0 = rho0;
  mesh.n = n;
  const int nv = 1 + 3 * n * (n + 1);  // center + sum 6j
  mesh.X.resize(2, nv);
  mesh.boundary.assign(nv, 0);
  mesh.X.col(0) = Vec2::Zero();
  // ring j (1-based) starts at vertex 1 + 3 j (j-1) and has 6j nodes
  auto ring_start = [](int j) { return 1 + 3 * j * (j - 1); };
  for (int j = 1; j <= n; ++j) {
    const Real r = rho0 * j / n;
    for (int k = 0; k < 6 * j; ++k) {
      const Real ang = 2 * M_PI * k / (6 * j);
      mesh.X.col(ring_start(j) + k) = Vec2(r * std::cos(ang), r * std::sin(ang));
      if (j == n) mesh.boundary[ring_start(j) + k] = 1;
    }
  }
  mesh.tris.resize(3, 6 * n * n);
  mesh.ring_tri_begin.assign(n + 2, 0);
  int t = 0;
  for (int j = 1; j <= n; ++j) {
    mesh.ring_tri_begin[j] = t;
    if (j == 1) {
      for (int k = 0; k < 6; ++k)
        mesh.tris.col(t++) = Eigen::Vector3i(ring_start(1) + k, ring_start(1) + (k + 1) % 6, 0);
      continue;
    }
    const int in0 = ring_start(j - 1), out0 = ring_start(j);
    const int nin = 6 * (j - 1), nout = 6 * j;
    for (int s = 0; s < 6; ++s) {
      // zipper the sector strip: outer chain has j segments, inner j-1
      int io = 0, ii = 0;
      auto outer = [&](int i) { return out0 + (s * j + i) % nout; };
      auto inner = [&](int i) { return in0 + (s * (j - 1) + i) % nin; };
      auto outer_ang = [&](int i) { return static_cast<Real>(s * j + i) / nout; };
      auto inner_ang = [&](int i) { return static_cast<Real>(s * (j - 1) + i) / nin; };
      while (io < j || ii < j - 1) {
        const bool advance_outer =
            ii == j - 1 || (io < j && outer_ang(io + 1) <= inner_ang(ii + 1));
        if (advance_outer) {
          mesh.tris.col(t++) = Eigen::Vector3i(outer(io), outer(io + 1), inner(ii));
          ++io;
        } else {
          mesh.tris.col(t++) = Eigen::Vector3i(outer(io), inner(ii + 1), inner(ii));
          ++ii;
        }
      }
    }
  }
  mesh.ring_tri_begin[n + 1] = t;
  finalize(mesh);
  return mesh;
}

// barycentric coordinates of p in triangle t
Eigen::Vector3d barycentric(const Mesh &mesh, int t, const Vec2 &p) {
  const auto tri = mesh.tris.col(t);
  const Vec2 d = p - Vec2(mesh.X.col(tri[0]));
  const Real l1 = mesh.G[t].row(1).dot(d);
  const Real l2 = mesh.G[t].row(2).dot(d);
  return {1 - l1 - l2, l1, l2};
}

bool inside(const Eigen::Vector3d &l, Real tol) {
  return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

}  // namespace

Mesh make_mesh(Mesh::Domain domain, int n, Real rho0) {
  if (n < 2) throw InvalidParams("mesh needs n >= 2");
  if (domain == Mesh::Domain::Disc && !(rho0 > 0)) throw InvalidParams("disc needs rho0 > 0");
  return domain == Mesh::Domain::Square ? make_square(n) : make_disc(n, rho0);
}

bool Mesh::contains(const Vec2 &p, Real tol) const {
  if (domain == Domain::Square)
    return std::fabs(p.x()) <= 1 + tol && std::fabs(p.y()) <= 1 + tol;
  return p.norm() <= rho0 * (1 + tol);
}

int Mesh::locate(const Vec2 &p) const {
  const Real tol = 1e-10;
  if (!contains(p, 1e-9)) {
    std::ostringstream os;
    os << "point (" << p.x() << "," << p.y() << ") outside the domain";
    throw OutOfDomain(os.str());
  }
  if (domain == Domain::Square) {
    const Real h = 2.0 / n;
    const int i = std::min(std::max(static_cast<int>(std::floor((p.x() + 1) / h)), 0), n - 1);
    const int j = std::min(std::max(static_cast<int>(std::floor((p.y() + 1) / h)), 0), n - 1);
    // candidate cells: the located cell first, then its neighbours (rounding)
    for (int dj = 0; dj <= 2; ++dj)
      for (int di = 0; di <= 2; ++di) {
        const int ci = i + (di == 2 ? -1 : di), cj = j + (dj == 2 ? -1 : dj);
        if (ci < 0 || ci >= n || cj < 0 || cj >= n) continue;
        const int base = 2 * (cj * n + ci);
        if (inside(barycentric(*this, base, p), tol)) return base;
        if (inside(barycentric(*this, base + 1, p), tol)) return base + 1;
      }
  } else {
    const Real r = p.norm();
    const int jr = std::min(std::max(static_cast<int>(std::ceil(r * n / rho0)), 1), n);
    for (int j : {jr, jr - 1, jr + 1}) {
      if (j < 1 || j > n) continue;
      for (int t = ring_tri_begin[j]; t < ring_tri_begin[j + 1]; ++t)
        if (inside(barycentric(*this, t, p), tol)) return t;
    }
  }
  // slow fallback for points squeezed between candidate sets by roundoff
  for (int t = 0; t < nt(); ++t)
    if (inside(barycentric(*this, t, p), tol)) return t;
  std::ostringstream os;
  os << "point (" << p.x() << "," << p.y() << ") not located";
  throw OutOfDomain(os.str());
}

std::vector<ElementState> element_states(const Mesh &mesh, const Mat2X &u) {
  std::vector<ElementState> out(mesh.nt());
  for (int t = 0; t < mesh.nt(); ++t) out[t] = element_state_one(mesh, u, t);
  return out;
}

Vec2 interpolate(const Mesh &mesh, const Mat2X &u, const Vec2 &p) {
  const int t = mesh.locate(p);
  const auto l = barycentric(mesh, t, p);
  const auto tri = mesh.tris.col(t);
  return l[0] * u.col(tri[0]) + l[1] * u.col(tri[1]) + l[2] * u.col(tri[2]);
}

Real interpolate_scalar(const Mesh &mesh, const VecX &w, const Vec2 &p) {
  const int t = mesh.locate(p);
  const auto l = barycentric(mesh, t, p);
  const auto tri = mesh.tris.col(t);
  return l[0] * w[tri[0]] + l[1] * w[tri[1]] + l[2] * w[tri[2]];
}

Mat2X identity_field(const Mesh &mesh) { return mesh.X; }

}  // namespace twistlab
