#include "twistlab/elastic_energy.hpp"

#include <cmath>
#include <limits>

#include "twistlab/errors.hpp"
#include "twistlab/reduce.hpp"
#include "twistlab/twist.hpp"

namespace twistlab {

ExtReal energy(const Mesh &mesh, const Mat2X &u, const EnergyConfig &config) {
  const int nt = mesh.nt();
  bool inverted = false;
  for (int t = 0; t < nt && !inverted; ++t)
    if (element_state_one(mesh, u, t).det <= 0) inverted = true;
  if (inverted) return ExtReal::infinity();
  const double total = block_sum(nt, [&](std::size_t t) {
    const ElementState st = element_state_one(mesh, u, static_cast<int>(t));
    return mesh.area[t] *
           (config.lambda * st.grad.squaredNorm() + config.law(st.det).value);
  });
  return ExtReal::finite(total);
}

Mat2X energy_gradient(const Mesh &mesh, const Mat2X &u, const EnergyConfig &config) {
  Mat2X g = Mat2X::Zero(2, mesh.nv());
  for (int t = 0; t < mesh.nt(); ++t) {
    const ElementState st = element_state_one(mesh, u, t);
    if (st.det <= 0) throw InfeasibleState("energy_gradient: inverted element");
    const Mat2 P =
        2 * config.lambda * st.grad + config.law.prime(st.det) * cof2(st.grad);
    const auto tri = mesh.tris.col(t);
    for (int v = 0; v < 3; ++v)
      g.col(tri[v]) += mesh.area[t] * (P * mesh.G[t].row(v).transpose());
  }
  for (int v = 0; v < mesh.nv(); ++v)
    if (mesh.dirichlet[v]) g.col(v).setZero();
  return g;
}

Real cutoff(Real R, Real r) {
  if (R <= r) return 1;
  if (R >= 2 * r) return 0;
  const Real t = (R - r) / r;
  return (1 - t) * (1 - t) * (1 + 2 * t);
}

Real cutoff_prime(Real R, Real r) {
  if (R <= r || R >= 2 * r) return 0;
  const Real t = (R - r) / r;
  return -6 * t * (1 - t) / r;
}

namespace {

void validate_spec(const Mesh &mesh, const VariationSpec &spec) {
  if (!(spec.r > 0)) throw InvalidParams("variation: r > 0 required");
  if (boundary_distance(mesh, spec.x0) <= 2 * spec.r)
    throw InvalidParams("variation: B(x0,2r) must stay inside the domain");
}

VecX nodal_eta(const Mesh &mesh, const VariationSpec &spec) {
  VecX eta(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v)
    eta[v] = cutoff((Vec2(mesh.X.col(v)) - spec.x0).norm(), spec.r);
  return eta;
}

}  // namespace

Mat2X build_variation(const Mesh &mesh, const Mat2X &u, const VariationSpec &spec) {
  validate_spec(mesh, spec);
  const Vec2 a = interpolate(mesh, u, spec.x0);
  const VecX eta = nodal_eta(mesh, spec);
  Mat2X ue = u;
  for (int v = 0; v < mesh.nv(); ++v)
    ue.col(v) += spec.eps * eta[v] * eta[v] * (u.col(v) - a);
  return ue;
}

VariationBoundsReport check_variation_bounds(const Mesh &mesh, const Mat2X &u,
                                             const VariationSpec &spec, Real tol_bound) {
  validate_spec(mesh, spec);
  if (!(spec.eps > -0.5 && spec.eps <= 0))
    throw InvalidParams("check_variation_bounds: need -1/2 < eps <= 0");

  const TwistField field = twist_field(mesh, u, spec.x0);
  const Real tol_twist = twist_tol(field);
  VariationBoundsReport rep;
  rep.twist_min = std::numeric_limits<Real>::infinity();
  for (int t = 0; t < mesh.nt(); ++t) {
    if (!field.valid[t]) continue;
    if ((Vec2(mesh.centroid.col(t)) - spec.x0).norm() <= 2 * spec.r)
      rep.twist_min = std::min(rep.twist_min, field.t[t]);
  }
  if (rep.twist_min < -tol_twist)
    throw InvalidParams("check_variation_bounds: twist negative on B(x0,2r)");

  const Mat2X ue = build_variation(mesh, u, spec);
  const VecX eta = nodal_eta(mesh, spec);
  const Real eps = spec.eps;

  rep.lower_margin = std::numeric_limits<Real>::infinity();
  rep.bracket_margin = std::numeric_limits<Real>::infinity();
  rep.upper_slack = std::numeric_limits<Real>::infinity();
  rep.scale = 0;

  for (int t = 0; t < mesh.nt(); ++t) {
    const auto tri = mesh.tris.col(t);
    const Real R0 = (Vec2(mesh.X.col(tri[0])) - spec.x0).norm();
    const Real R1 = (Vec2(mesh.X.col(tri[1])) - spec.x0).norm();
    const Real R2 = (Vec2(mesh.X.col(tri[2])) - spec.x0).norm();
    const Real Rc = (Vec2(mesh.centroid.col(t)) - spec.x0).norm();
    const bool plateau = R0 <= spec.r && R1 <= spec.r && R2 <= spec.r;
    const bool far =
        R0 >= 2 * spec.r && R1 >= 2 * spec.r && R2 >= 2 * spec.r && Rc >= 2 * spec.r;
    if (plateau)
      ++rep.plateau_elements;
    else if (far)
      ++rep.far_elements;
    else
      ++rep.mixed_elements;

    const Real det_u = element_state_one(mesh, u, t).det;
    const Real det_ue = element_state_one(mesh, ue, t).det;
    const Real eta_bar = (eta[tri[0]] + eta[tri[1]] + eta[tri[2]]) / 3;
    const Real fac = 1 + eps * eta_bar * eta_bar;
    const Real expansion =
        fac * fac * det_u +
        (field.valid[t] ? 2 * eps * cutoff_prime(Rc, spec.r) * eta_bar * fac * field.t[t]
                        : 0.0);

    const Real resid = std::fabs(det_ue - expansion);
    rep.resid_all = std::max(rep.resid_all, resid);
    if (plateau || far) rep.resid_plateau_far = std::max(rep.resid_plateau_far, resid);

    if ((Vec2(mesh.centroid.col(t)) - spec.x0).norm() <= 2 * spec.r)
      rep.scale = std::max(rep.scale, std::fabs(det_u));
    rep.lower_margin = std::min(rep.lower_margin, det_ue - det_u / 4);
    rep.bracket_margin = std::min(rep.bracket_margin, det_u - fac * fac * det_u);
    rep.upper_slack = std::min(rep.upper_slack, det_u - det_ue);
  }
  if (rep.scale == 0) rep.scale = 1;

  if (rep.lower_margin < -tol_bound * rep.scale)
    throw BoundViolated("det grad u^eps >= det grad u / 4 failed beyond tolerance");
  if (rep.bracket_margin < -tol_bound * rep.scale)
    throw BoundViolated("(1+eps eta^2)^2 det <= det failed beyond tolerance");
  return rep;
}

InequalityProbeReport variational_inequality_probe(const Mesh &mesh, const Mat2X &u,
                                                   const VariationSpec &spec,
                                                   const EnergyConfig &config,
                                                   const std::vector<Real> &eps_ladder) {
  validate_spec(mesh, spec);
  const TwistField field = twist_field(mesh, u, spec.x0);
  const Vec2 a = interpolate(mesh, u, spec.x0);
  const VecX eta = nodal_eta(mesh, spec);
  VecX eta_sq(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) eta_sq[v] = eta[v] * eta[v];

  InequalityProbeReport rep;
  rep.twist_min = std::numeric_limits<Real>::infinity();
  for (int t = 0; t < mesh.nt(); ++t)
    if (field.valid[t] &&
        (Vec2(mesh.centroid.col(t)) - spec.x0).norm() <= 2 * spec.r)
      rep.twist_min = std::min(rep.twist_min, field.t[t]);

  rep.lhs = block_sum(mesh.nt(), [&](std::size_t ti) {
    const int t = static_cast<int>(ti);
    const auto tri = mesh.tris.col(t);
    const ElementState st = element_state_one(mesh, u, t);
    const Real eta_bar = (eta[tri[0]] + eta[tri[1]] + eta[tri[2]]) / 3;
    const Vec2 ubar = (u.col(tri[0]) + u.col(tri[1]) + u.col(tri[2])) / 3;
    const Vec2 grad_eta_sq = scalar_gradient_one(mesh, eta_sq, t);
    const Real cross = (ubar - a).transpose() * st.grad * grad_eta_sq;
    return config.lambda * mesh.area[t] *
           (eta_bar * eta_bar * st.grad.squaredNorm() + cross);
  });

  rep.rhs = block_sum(mesh.nt(), [&](std::size_t ti) {
    const int t = static_cast<int>(ti);
    const auto tri = mesh.tris.col(t);
    const ElementState st = element_state_one(mesh, u, t);
    if (st.det <= 0) return 0.0;
    const Real eta_bar = (eta[tri[0]] + eta[tri[1]] + eta[tri[2]]) / 3;
    const Real Rc = (Vec2(mesh.centroid.col(t)) - spec.x0).norm();
    if (st.det < 1)
      return mesh.area[t] * eta_bar * eta_bar *
             std::fabs(config.law.prime(st.det)) * st.det;
    return mesh.area[t] * eta_bar * (field.valid[t] ? field.t[t] : 0.0) *
           config.law.prime(st.det) * std::fabs(cutoff_prime(Rc, spec.r));
  });

  const ExtReal e0 = energy(mesh, u, config);
  rep.min_det_margin = std::numeric_limits<Real>::infinity();
  for (Real eps : eps_ladder) {
    VariationSpec s = spec;
    s.eps = eps;
    const Mat2X ue = build_variation(mesh, u, s);
    const ExtReal ee = energy(mesh, ue, config);
    const Real slope = (ee.as_double() - e0.as_double()) / eps;
    rep.slopes.emplace_back(eps, slope);
    for (int t = 0; t < mesh.nt(); ++t) {
      const Real det_u = element_state_one(mesh, u, t).det;
      const Real det_ue = element_state_one(mesh, ue, t).det;
      rep.min_det_margin = std::min(rep.min_det_margin, det_ue - det_u / 4);
    }
  }
  return rep;
}

}  // namespace twistlab
