#include "twistlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

// Dyadic ladder r_max, r_max/2, ... floored at 4 h_mesh.
std::vector<Real> dyadic_ladder(const Mesh &mesh, Real r_max) {
  if (r_max <= 0) throw InvalidParams("decay ladder needs r_max > 0");
  const Real floor_r = 4 * mesh.h_mesh;
  std::vector<Real> radii;
  for (Real r = r_max; r >= floor_r; r *= 0.5) radii.push_back(r);
  if (radii.size() < 3)
    throw TooFewRadii("ladder from r_max " + std::to_string(r_max) + " has " +
                      std::to_string(radii.size()) + " radii above 4 h_mesh");
  return radii;
}

// phi(r) = sum of weights of elements whose centroid lies in B(x0, r).
// Radii descending, so each element lands in all balls down to its distance.
DecayProfile profile_from_weights(const Mesh &mesh, const VecX &weight, const Vec2 &x0,
                                  Real r_max) {
  DecayProfile out;
  out.x0 = x0;
  auto radii = dyadic_ladder(mesh, r_max);
  const int nr = static_cast<int>(radii.size());
  out.radii = Eigen::Map<const VecX>(radii.data(), nr);
  out.phi = VecX::Zero(nr);
  for (int e = 0; e < mesh.nt(); ++e) {
    const Real d = (mesh.centroid.col(e) - x0).norm();
    for (int k = 0; k < nr && d <= radii[static_cast<size_t>(k)]; ++k)
      out.phi[k] += weight[e];
  }
  // Least squares on log-log over positive samples.
  Real sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (int k = 0; k < nr; ++k) {
    if (out.phi[k] <= 0) continue;
    const Real lx = std::log(out.radii[k]), ly = std::log(out.phi[k]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; n += 1;
  }
  out.used = static_cast<int>(n);
  if (out.used < 3)
    throw TooFewRadii("only " + std::to_string(out.used) +
                      " radii carry positive Dirichlet energy");
  const Real det = n * sxx - sx * sx;
  out.alpha = (n * sxy - sx * sy) / det;
  const Real b = (sy - out.alpha * sx) / n;
  Real ss = 0;
  for (int k = 0; k < nr; ++k) {
    if (out.phi[k] <= 0) continue;
    const Real r2 = std::log(out.phi[k]) - (out.alpha * std::log(out.radii[k]) + b);
    ss += r2 * r2;
  }
  out.residual = std::sqrt(ss / n);
  return out;
}

VecX dirichlet_weights(const Mesh &mesh, const Mat2X &u) {
  VecX w(mesh.nt());
  for (int e = 0; e < mesh.nt(); ++e) {
    Mat2 grad = Mat2::Zero();
    for (int v = 0; v < 3; ++v)
      grad += u.col(mesh.tris(v, e)) * mesh.G[static_cast<size_t>(e)].row(v);
    w[e] = mesh.area[e] * grad.squaredNorm();
  }
  return w;
}

}  // namespace

DecayProfile dirichlet_growth(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                              Real r_max) {
  return profile_from_weights(mesh, dirichlet_weights(mesh, u), x0, r_max);
}

DecayProfile dirichlet_growth_scalar(const Mesh &mesh, const VecX &w, const Vec2 &x0,
                                     Real r_max) {
  VecX weight(mesh.nt());
  for (int e = 0; e < mesh.nt(); ++e) {
    Vec2 g = scalar_gradient_one(mesh, w, e);
    weight[e] = mesh.area[e] * g.squaredNorm();
  }
  return profile_from_weights(mesh, weight, x0, r_max);
}

CaccioppoliReport caccioppoli_ratio(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                                    Real r) {
  if (r <= 0) throw InvalidParams("caccioppoli_ratio needs r > 0");
  CaccioppoliReport rep;
  const VecX w = dirichlet_weights(mesh, u);
  for (int e = 0; e < mesh.nt(); ++e) {
    const Real d = (mesh.centroid.col(e) - x0).norm();
    if (d <= r)
      rep.D_in += w[e];
    else if (d <= 2 * r)
      rep.D_ann += w[e];
  }
  rep.C_prime = rep.D_in / (r * r + rep.D_ann);
  return rep;
}

namespace {

GrowthLemmaCase growth_case_shell(Real c, Real mu, Real p, Real r1, int levels) {
  if (!(c >= 0) || !(mu > 0) || !(mu < 1) || !(p > 0) || !(r1 > 0) || levels < 2)
    throw InvalidParams("growth case needs c >= 0, mu in (0,1), p > 0, r1 > 0");
  GrowthLemmaCase out;
  out.c = c; out.mu = mu; out.p = p; out.r1 = r1;
  out.radii = VecX(levels + 1);
  for (int k = 0; k <= levels; ++k) out.radii[k] = r1 * std::pow(0.5, k);
  out.phi = VecX::Zero(levels + 1);
  return out;
}

}  // namespace

GrowthLemmaCase growth_case_power(Real c, Real mu, Real p, Real r1, int levels) {
  GrowthLemmaCase out = growth_case_shell(c, mu, p, r1, levels);
  const Real c_min = std::max<Real>(0, 1 - mu * std::pow(2.0, p));
  if (c < c_min)
    throw InvalidParams("phi = r^p violates (iterant) unless c >= " +
                        std::to_string(c_min));
  for (int k = 0; k <= levels; ++k) out.phi[k] = std::pow(out.radii[k], p);
  return out;
}

GrowthLemmaCase growth_case_recursion(Real c, Real mu, Real p, Real r1, int levels) {
  GrowthLemmaCase out = growth_case_shell(c, mu, p, r1, levels);
  out.phi[0] = 1;
  for (int k = 1; k <= levels; ++k)
    out.phi[k] = c * std::pow(out.radii[k], p) + mu * out.phi[k - 1];
  return out;
}

GrowthLemmaReport growth_lemma_check(const GrowthLemmaCase &cs) {
  const int n = static_cast<int>(cs.radii.size());
  if (n < 3) throw TooFewRadii("growth case needs at least 3 dyadic radii");
  if (!(cs.mu > 0) || !(cs.mu < 1) || !(cs.c >= 0) || !(cs.p > 0))
    throw HypothesisViolated("growth lemma requires c >= 0, p > 0, mu in (0,1)");
  for (int k = 0; k + 1 < n; ++k) {
    if (cs.phi[k + 1] > cs.phi[k] + 1e-15 * std::abs(cs.phi[k]))
      throw HypothesisViolated("phi not nondecreasing at r = " +
                               std::to_string(cs.radii[k + 1]));
    const Real rhs = cs.c * std::pow(cs.radii[k + 1], cs.p) + cs.mu * cs.phi[k];
    if (cs.phi[k + 1] > rhs * (1 + 1e-12))
      throw HypothesisViolated("(iterant) fails at r = " +
                               std::to_string(cs.radii[k + 1]));
  }

  GrowthLemmaReport rep;
  rep.alpha_prime = std::log2(1.0 / cs.mu);
  const Real r1 = cs.r1;
  rep.ctilde = cs.c / (1 - cs.mu) *
               (std::pow(2 * r1, cs.p / 2) +
                std::pow(r1 / 2, cs.p) * std::pow(r1, -rep.alpha_prime / 2));
  rep.min_slack = std::numeric_limits<Real>::infinity();
  for (int k = 0; k < n; ++k) {
    const Real r = cs.radii[k];
    const Real bound =
        rep.ctilde * std::max(std::pow(r, cs.p / 2), std::pow(r, rep.alpha_prime / 2)) +
        std::pow(2.0, rep.alpha_prime) * std::pow(r / r1, rep.alpha_prime) * cs.phi[0];
    rep.min_slack = std::min(rep.min_slack, bound - cs.phi[k]);
  }
  rep.alpha_measured = std::log2(cs.phi[n - 2] / cs.phi[n - 1]);
  return rep;
}

PoincareReport poincare_annulus_check(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                                      Real r, Real slack_frac) {
  if (r <= 0) throw InvalidParams("poincare_annulus_check needs r > 0");
  PoincareReport rep;
  const Vec2 ux0 = interpolate(mesh, u, x0);
  Real dirichlet = 0;
  for (int e = 0; e < mesh.nt(); ++e) {
    const Real d = (mesh.centroid.col(e) - x0).norm();
    if (d <= r || d > 2 * r) continue;
    Mat2 grad = Mat2::Zero();
    Vec2 un[3];
    for (int v = 0; v < 3; ++v) {
      un[v] = u.col(mesh.tris(v, e));
      grad += un[v] * mesh.G[static_cast<size_t>(e)].row(v);
    }
    dirichlet += mesh.area[e] * grad.squaredNorm();
    // |u - u(x0)|^2 is quadratic on the element; the edge-midpoint rule is
    // exact for quadratics.
    Real q = 0;
    for (int v = 0; v < 3; ++v) {
      const Vec2 mid = 0.5 * (un[v] + un[(v + 1) % 3]) - ux0;
      q += mid.squaredNorm();
    }
    rep.L += mesh.area[e] / 3 * q;
  }
  rep.Rstar = 7.0 * r * r / 3.0 * dirichlet;
  rep.slack = rep.Rstar - rep.L;
  rep.ok = rep.L <= rep.Rstar * (1 + slack_frac);
  return rep;
}

Mat2X random_smooth_field(const Mesh &mesh, Rng &rng, int smooth_passes) {
  Mat2X u(2, mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    u(0, v) = rng.normal();
    u(1, v) = rng.normal();
  }
  // Vertex adjacency from the triangulation, then Jacobi averaging.
  std::vector<std::vector<int>> nbrs(static_cast<size_t>(mesh.nv()));
  for (int e = 0; e < mesh.nt(); ++e)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) nbrs[static_cast<size_t>(mesh.tris(a, e))].push_back(mesh.tris(b, e));
  for (auto &lst : nbrs) {
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
  }
  for (int pass = 0; pass < smooth_passes; ++pass) {
    Mat2X next = u;
    for (int v = 0; v < mesh.nv(); ++v) {
      Vec2 acc = u.col(v);
      for (int w : nbrs[static_cast<size_t>(v)]) acc += u.col(w);
      next.col(v) = acc / (1.0 + static_cast<Real>(nbrs[static_cast<size_t>(v)].size()));
    }
    u = next;
  }
  return u;
}

}  // namespace twistlab
