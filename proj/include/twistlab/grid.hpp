#pragma once

/*! @file grid.hpp
    @brief Triangulated planar domains (square [-1,1]^2, disc of radius rho0)
           with P1 nodal fields and exact per-element differential operators.

    Conventions used throughout the toolkit:
      - triangles are CCW, areas strictly positive;
      - gradients of P1 fields are constant per element and exact for affine
        fields;
      - element membership in balls is decided by the centroid. */

#include <cstdint>
#include <vector>

#include "twistlab/types.hpp"

namespace twistlab {

struct Mesh {
  enum class Domain { Square, Disc };

  Domain domain = Domain::Square;
  Real rho0 = 1.0;  // disc radius (ignored for the square)
  int n = 0;        // subdivisions per side / radial rings

  Mat2X X;                        // vertex coordinates, 2 x nv
  Eigen::Matrix3Xi tris;          // connectivity, 3 x nt
  VecX area;                      // per-triangle area
  Mat2X centroid;                 // per-triangle centroid
  std::vector<Eigen::Matrix<Real, 3, 2>> G;  // P1 shape gradients per tri
  std::vector<std::uint8_t> boundary;        // per-vertex boundary flag
  std::vector<std::uint8_t> dirichlet;       // per-vertex Dirichlet flag
  Real total_area = 0;
  Real h_mesh = 0;  // max element diameter

  int nv() const { return static_cast<int>(X.cols()); }
  int nt() const { return static_cast<int>(tris.cols()); }

  /// Triangle containing p (tolerant at edges).  Throws OutOfDomain.
  int locate(const Vec2 &p) const;

  bool contains(const Vec2 &p, Real tol = 1e-12) const;

  std::vector<int> ring_tri_begin;  // disc only: triangle range per ring
};

/// Build the structured mesh.  Square: crisscross split along the fixed
/// diagonal of every cell.  Disc: n concentric rings, ring j carrying 6j
/// nodes, zipper-triangulated strips (6 n^2 triangles).  Throws InvalidParams
/// for n < 2.
Mesh make_mesh(Mesh::Domain domain, int n, Real rho0 = 1.0);

//// Per-element first-order state of a deformation u (nodal 2 x nv).
struct ElementState {
  Mat2 grad;
  Real det = 0;
  Mat2 adj;
};

inline ElementState element_state_one(const Mesh &mesh, const Mat2X &u, int t) {
  ElementState s;
  const auto tri = mesh.tris.col(t);
  Eigen::Matrix<Real, 2, 3> U;
  U.col(0) = u.col(tri[0]);
  U.col(1) = u.col(tri[1]);
  U.col(2) = u.col(tri[2]);
  s.grad.noalias() = U * mesh.G[t];
  s.det = s.grad.determinant();
  s.adj = adj2(s.grad);
  return s;
}

std::vector<ElementState> element_states(const Mesh &mesh, const Mat2X &u);

/// P1 gradient of a nodal scalar field on element t.
inline Vec2 scalar_gradient_one(const Mesh &mesh, const VecX &w, int t) {
  const auto tri = mesh.tris.col(t);
  return mesh.G[t].transpose() *
         Eigen::Vector3d(w[tri[0]], w[tri[1]], w[tri[2]]);
}

/// Barycentric P1 interpolation; exact on affine fields.  Throws OutOfDomain.
Vec2 interpolate(const Mesh &mesh, const Mat2X &u, const Vec2 &p);
Real interpolate_scalar(const Mesh &mesh, const VecX &w, const Vec2 &p);

/// Distance from p to the domain boundary (negative outside).
inline Real boundary_distance(const Mesh &mesh, const Vec2 &p) {
  if (mesh.domain == Mesh::Domain::Square)
    return std::min(1 - std::fabs(p.x()), 1 - std::fabs(p.y()));
  return mesh.rho0 - p.norm();
}

/// Nodal field of an analytic map.
template <class F>
Mat2X sample_map(const Mesh &mesh, F &&f) {
  Mat2X u(2, mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) u.col(v) = f(Vec2(mesh.X.col(v)));
  return u;
}

Mat2X identity_field(const Mesh &mesh);

}  // namespace twistlab
