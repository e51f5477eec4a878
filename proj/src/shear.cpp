#include "twistlab/shear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "twistlab/errors.hpp"
#include "twistlab/reduce.hpp"

namespace twistlab {

VecX shear_det(const Mesh &mesh, const VecX &sigma) {
  VecX det(mesh.nt());
  for (int t = 0; t < mesh.nt(); ++t)
    det[t] = 1 + scalar_gradient_one(mesh, sigma, t)[1];
  return det;
}

ExtReal shear_energy(const Mesh &mesh, const VecX &sigma, Real lambda,
                     const EnergyLaw &law) {
  const int nt = mesh.nt();
  std::vector<Real> dens(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const Vec2 g = scalar_gradient_one(mesh, sigma, t);
    const ExtReal h = law(1 + g[1]);
    if (!h.is_finite()) return ExtReal::infinity();
    dens[static_cast<size_t>(t)] =
        mesh.area[t] * (lambda * (2 + 2 * g[1] + g.squaredNorm()) + h.value);
  }
  return ExtReal::finite(block_sum(static_cast<size_t>(nt),
                                   [&](size_t i) { return dens[i]; }));
}

VecX boundary_from_profiles(const Mesh &mesh, const std::function<Real(Real)> &phi_plus,
                            const std::function<Real(Real)> &phi_minus) {
  if (mesh.domain != Mesh::Domain::Square)
    throw InvalidParams("shear boundary profiles are defined on the square only");
  VecX sigma(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    const Real x1 = mesh.X(0, v), x2 = mesh.X(1, v);
    const Real pp = phi_plus(x1), pm = phi_minus(x1);
    if (pp < pm)
      throw ProfileOrderViolated("phi_plus < phi_minus at x1 = " + std::to_string(x1));
    sigma[v] = 0.5 * (1 + x2) * pp + 0.5 * (1 - x2) * pm;
  }
  return sigma;
}

Real measured_lipschitz(const Mesh &mesh, const VecX &sigma) {
  Real m = 0;
  for (int t = 0; t < mesh.nt(); ++t)
    m = std::max(m, std::abs(scalar_gradient_one(mesh, sigma, t)[0]));
  return m;
}

namespace {

//// Shear problem for the shared descend() loop: pure energy plus the
//// quadratic Lipschitz penalty w ((|sigma_,1| - M)_+)^2.
class ShearProblem {
 public:
  using State = VecX;

  ShearProblem(const Mesh &mesh, Real M, Real lambda, const EnergyLaw &law, Real weight,
               std::vector<std::uint8_t> fixed)
      : mesh_(&mesh),
        M_(M),
        lambda_(lambda),
        law_(&law),
        weight_(weight),
        fixed_(std::move(fixed)),
        lumped_(ElasticProblem::lumped_areas(mesh)) {}

  ExtReal value(const State &s) const {
    ExtReal e = shear_energy(*mesh_, s, lambda_, *law_);
    if (!e.is_finite()) return e;
    Real pen = 0;
    for (int t = 0; t < mesh_->nt(); ++t) {
      const Real ex =
          std::max<Real>(std::abs(scalar_gradient_one(*mesh_, s, t)[0]) - M_, 0);
      pen += mesh_->area[t] * ex * ex;
    }
    e += weight_ * pen;
    return e;
  }

  State gradient(const State &s) const {
    State g = State::Zero(mesh_->nv());
    for (int t = 0; t < mesh_->nt(); ++t) {
      const Vec2 gs = scalar_gradient_one(*mesh_, s, t);
      const Real det = 1 + gs[1];
      if (!(det > 0)) throw InfeasibleState("element inverted in shear gradient");
      const Real hp = law_->prime(det);
      const Real ex = std::max<Real>(std::abs(gs[0]) - M_, 0);
      const Real pen1 = 2 * weight_ * ex * (gs[0] >= 0 ? 1.0 : -1.0);
      for (int v = 0; v < 3; ++v) {
        const Vec2 Gv = mesh_->G[t].row(v).transpose();
        g[mesh_->tris(v, t)] +=
            mesh_->area[t] * (lambda_ * (2 * Gv[1] + 2 * gs.dot(Gv)) + hp * Gv[1] +
                              pen1 * Gv[0]);
      }
    }
    for (int v = 0; v < mesh_->nv(); ++v)
      if (fixed_[static_cast<size_t>(v)]) g[v] = 0;
    return g;
  }

  Real min_det(const State &s) const {
    Real md = std::numeric_limits<Real>::infinity();
    for (int t = 0; t < mesh_->nt(); ++t)
      md = std::min(md, 1 + scalar_gradient_one(*mesh_, s, t)[1]);
    return md;
  }

  Real stat_norm(const State &g) const {
    Real m = 0;
    for (int v = 0; v < mesh_->nv(); ++v)
      m = std::max(m, std::abs(g[v]) / lumped_[v]);
    return m;
  }

 private:
  const Mesh *mesh_;
  Real M_, lambda_;
  const EnergyLaw *law_;
  Real weight_;
  std::vector<std::uint8_t> fixed_;
  VecX lumped_;
};

std::vector<std::uint8_t> dirichlet_mask(const Mesh &mesh, bool partial) {
  if (!partial) return mesh.boundary;
  std::vector<std::uint8_t> fixed(static_cast<size_t>(mesh.nv()), 0);
  for (int v = 0; v < mesh.nv(); ++v)
    if (std::abs(std::abs(mesh.X(1, v)) - 1) < 1e-12) fixed[static_cast<size_t>(v)] = 1;
  return fixed;
}

}  // namespace

ShearSolveResult minimize_shear(const Mesh &mesh, const VecX &sigma0, Real M,
                                Real lambda, const EnergyLaw &law,
                                const SolveSettings &settings,
                                const ShearSolveOptions &opts) {
  if (sigma0.size() != mesh.nv())
    throw InvalidParams("sigma0 size does not match the mesh");
  ShearProblem prob(mesh, M, lambda, law, opts.lip_weight,
                    dirichlet_mask(mesh, opts.partial_boundary));
  SolveSettings st = settings;
  st.nonmonotone = opts.nonmonotone;
  auto res = descend(prob, sigma0, st);

  ShearSolveResult out;
  out.field.sigma = std::move(res.u);
  out.field.M = M;
  out.field.lambda = lambda;
  out.field.law = law;
  out.energy = shear_energy(mesh, out.field.sigma, lambda, law).as_double();
  out.stat_norm = res.trace.empty() ? 0 : res.trace.back().grad_norm;
  out.min_det = shear_det(mesh, out.field.sigma).minCoeff();
  out.lip_measured = measured_lipschitz(mesh, out.field.sigma);
  out.lip_residual = std::max<Real>(out.lip_measured - M, 0);
  out.converged = res.converged;
  out.iters = res.trace.empty() ? 0 : res.trace.back().iter;
  out.trace = std::move(res.trace);
  return out;
}

XiFields xi_fields(const Mesh &mesh, const VecX &sigma, const Vec2 &x0, Real M) {
  XiFields xi;
  xi.x0 = x0;
  xi.C = 1 + M;
  xi.sigma0 = interpolate_scalar(mesh, sigma, x0);
  xi.xi_plus = VecX::Zero(mesh.nv());
  xi.xi_minus = VecX::Zero(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    const Real R = (Vec2(mesh.X.col(v)) - x0).norm();
    const Real d = sigma[v] - xi.sigma0;
    xi.xi_plus[v] = std::max<Real>(d - xi.C * R, 0);
    xi.xi_minus[v] = std::max<Real>(-(d + xi.C * R), 0);
  }
  const Real tol = 1e-12 * (1 + sigma.cwiseAbs().maxCoeff());
  xi.chi_plus.assign(static_cast<size_t>(mesh.nt()), 0);
  xi.chi_minus.assign(static_cast<size_t>(mesh.nt()), 0);
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto tri = mesh.tris.col(t);
    const Real sc = (sigma[tri[0]] + sigma[tri[1]] + sigma[tri[2]]) / 3 - xi.sigma0;
    const Vec2 c = mesh.centroid.col(t);
    const Real R = (c - x0).norm();
    const Real gu = sc - xi.C * R;  // xi_+ support when > 0
    const Real gl = sc + xi.C * R;  // xi_- support when < 0
    if (gu > 0) {
      xi.chi_plus[static_cast<size_t>(t)] = 1;
      if (gu > tol && c[1] < x0[1]) ++xi.b3_violations;
    }
    if (gl < 0) {
      xi.chi_minus[static_cast<size_t>(t)] = 1;
      if (gl < -tol && c[1] > x0[1]) ++xi.b4_violations;
    }
  }
  return xi;
}

namespace {

void validate_shear_spec(const Mesh &mesh, const VariationSpec &spec) {
  if (!(spec.r > 0)) throw InvalidParams("variation radius must be positive");
  if (!(boundary_distance(mesh, spec.x0) > 2 * spec.r))
    throw InvalidParams("B(x0, 2r) must stay inside the domain");
}

// sigma^{eps,+} = sigma + eps eta^2 xi_+;  sigma^{eps,-} = sigma - eps eta^2 xi_-
// (xi_- stored unsigned).
VecX shear_variation_field(const Mesh &mesh, const VecX &sigma, const XiFields &xi,
                           const VariationSpec &spec, int sign) {
  VecX out = sigma;
  for (int v = 0; v < mesh.nv(); ++v) {
    const Real R = (Vec2(mesh.X.col(v)) - xi.x0).norm();
    const Real eta = cutoff(R, spec.r);
    if (eta == 0) continue;
    const Real b = eta * eta * (sign > 0 ? xi.xi_plus[v] : xi.xi_minus[v]);
    out[v] += (sign > 0 ? spec.eps : -spec.eps) * b;
  }
  return out;
}

}  // namespace

ShearVariationReport build_shear_variation(const Mesh &mesh, const VecX &sigma,
                                           const VariationSpec &spec, int sign, Real M,
                                           Real tol_bound) {
  validate_shear_spec(mesh, spec);
  if (!(spec.eps > -0.5) || !(spec.eps <= 0))
    throw InvalidParams("shear variation needs eps in (-1/2, 0]");
  const XiFields xi = xi_fields(mesh, sigma, spec.x0, M);

  ShearVariationReport rep;
  rep.sigma_eps = shear_variation_field(mesh, sigma, xi, spec, sign);

  // C'_pm = 1 + C + (c_f/r) sup_{B(x0,2r)} |sigma - sigma(x0) -/+ C R|,
  // nodal sup as the discrete stand-in.
  Real sup = 0;
  for (int v = 0; v < mesh.nv(); ++v) {
    const Real R = (Vec2(mesh.X.col(v)) - xi.x0).norm();
    if (R > 2 * spec.r) continue;
    const Real excess = sigma[v] - xi.sigma0 - (sign > 0 ? 1.0 : -1.0) * xi.C * R;
    sup = std::max(sup, std::abs(excess));
  }
  rep.C_prime = 1 + xi.C + kCutoffSqSlope / spec.r * sup;

  // det is affine in the nodal field, so det_eps = det + bump_,2 exactly
  // (bump = sigma_eps - sigma already carries eps); the (b5)-style residual
  // checks the direct recomputation against that.
  VecX bump = rep.sigma_eps - sigma;
  const VecX det = shear_det(mesh, sigma);
  const VecX det_eps = shear_det(mesh, rep.sigma_eps);
  rep.lower_margin = std::numeric_limits<Real>::infinity();
  rep.upper_margin = std::numeric_limits<Real>::infinity();
  rep.min_det = std::numeric_limits<Real>::infinity();
  Real scale = 1;
  for (int t = 0; t < mesh.nt(); ++t) {
    const Real slope = scalar_gradient_one(mesh, bump, t)[1];
    rep.b5_resid = std::max(rep.b5_resid, std::abs(det_eps[t] - (det[t] + slope)));
    rep.lower_margin = std::min(rep.lower_margin, det_eps[t] - 0.5 * det[t]);
    rep.upper_margin =
        std::min(rep.upper_margin, det[t] + rep.C_prime * std::abs(spec.eps) - det_eps[t]);
    rep.min_det = std::min(rep.min_det, det_eps[t]);
    if ((mesh.centroid.col(t) - spec.x0).norm() <= 2 * spec.r)
      scale = std::max(scale, std::abs(det[t]));
  }
  if (rep.lower_margin < -tol_bound * scale)
    throw BoundViolated("shear det lower bound margin " +
                        std::to_string(rep.lower_margin));
  if (rep.upper_margin < -tol_bound * scale)
    throw BoundViolated("shear det upper bound margin " +
                        std::to_string(rep.upper_margin));
  return rep;
}

ShearProbeReport shear_inequality_probe(const Mesh &mesh, const VecX &sigma,
                                        const VariationSpec &spec, Real lambda,
                                        const EnergyLaw &law, Real M,
                                        const std::vector<Real> &eps_ladder) {
  validate_shear_spec(mesh, spec);
  const XiFields xi = xi_fields(mesh, sigma, spec.x0, M);
  const Real C = xi.C;

  ShearProbeReport rep;
  const VecX det = shear_det(mesh, sigma);
  rep.min_det = det.minCoeff();

  // Element quadrature at centroids.  The "-" branch carries minus signs on
  // the xi-weighted terms (unsigned xi_- storage).
  for (int t = 0; t < mesh.nt(); ++t) {
    const auto tri = mesh.tris.col(t);
    const Vec2 c = mesh.centroid.col(t);
    const Real R = (c - spec.x0).norm();
    if (R >= 2 * spec.r || R < 1e-14) continue;
    const Real f = cutoff(R, spec.r);
    const Real eta2 = f * f;
    const Vec2 nu = (c - spec.x0) / R;
    const Vec2 grad_eta2 = 2 * f * cutoff_prime(R, spec.r) * nu;
    const Vec2 gs = scalar_gradient_one(mesh, sigma, t);
    const Real sc = (sigma[tri[0]] + sigma[tri[1]] + sigma[tri[2]]) / 3 - xi.sigma0;
    const Real a = mesh.area[t];

    const Real xp = std::max<Real>(sc - C * R, 0);
    if (xp > 0) {
      rep.lhs_plus += a * lambda *
                      ((grad_eta2[1] + gs.dot(grad_eta2)) * xp +
                       eta2 * (gs[1] - C * nu[1]) + eta2 * gs.dot(gs - C * nu));
      if (det[t] > 1)
        rep.rhs_plus += a * std::abs(law.prime(det[t])) / 2 *
                        (grad_eta2.norm() * xp + C * eta2);
    }
    const Real xm = std::max<Real>(-(sc + C * R), 0);
    if (xm > 0) {
      rep.lhs_minus += a * lambda *
                       (-(grad_eta2[1] + gs.dot(grad_eta2)) * xm +
                        eta2 * (gs[1] + C * nu[1]) + eta2 * gs.dot(gs + C * nu));
      if (det[t] > 1)
        rep.rhs_minus += a * std::abs(law.prime(det[t])) / 2 *
                         (grad_eta2.norm() * xm + C * eta2);
    }
  }

  const Real e0 = shear_energy(mesh, sigma, lambda, law).as_double();
  for (Real eps : eps_ladder) {
    VariationSpec s = spec;
    s.eps = eps;
    for (int sign : {+1, -1}) {
      const VecX se = shear_variation_field(mesh, sigma, xi, s, sign);
      const Real ee = shear_energy(mesh, se, lambda, law).as_double();
      auto &dst = sign > 0 ? rep.slopes_plus : rep.slopes_minus;
      dst.emplace_back(eps, (ee - e0) / eps);
    }
  }
  return rep;
}

std::vector<XiHolderReport> xi_holder_diagnostics(const Mesh &mesh, const VecX &sigma,
                                                  const std::vector<Vec2> &x0_list,
                                                  Real M, Real r_max) {
  std::vector<XiHolderReport> out;
  out.reserve(x0_list.size());
  const Real tol = 1e-12 * (1 + sigma.cwiseAbs().maxCoeff());
  for (const Vec2 &x0 : x0_list) {
    XiHolderReport rep;
    rep.x0 = x0;
    const XiFields xi = xi_fields(mesh, sigma, x0, M);
    try {
      rep.plus = dirichlet_growth_scalar(mesh, xi.xi_plus, x0, r_max);
      rep.plus_fit = true;
    } catch (const TooFewRadii &) {
    }
    try {
      rep.minus = dirichlet_growth_scalar(mesh, xi.xi_minus, x0, r_max);
      rep.minus_fit = true;
    } catch (const TooFewRadii &) {
    }

    // Morrey turns a decay exponent a of the Dirichlet profile into a C^{0,a/2}
    // modulus; cap at 1 for the reconstruction constant.
    Real alpha = 1;
    if (rep.plus_fit && rep.plus.alpha > 0) alpha = std::min(alpha, rep.plus.alpha / 2);
    if (rep.minus_fit && rep.minus.alpha > 0)
      alpha = std::min(alpha, rep.minus.alpha / 2);

    for (int v = 0; v < mesh.nv(); ++v) {
      const Real R = (Vec2(mesh.X.col(v)) - x0).norm();
      if (R <= 0 || R > r_max) continue;
      const Real d = sigma[v] - xi.sigma0;
      Real bound;
      if (d - xi.C * R > 0) {
        ++rep.case_upper;
        bound = xi.xi_plus[v] + xi.C * R;
      } else if (d + xi.C * R < 0) {
        ++rep.case_lower;
        bound = xi.xi_minus[v] + xi.C * R;
      } else {
        ++rep.case_band;
        bound = xi.C * R;
      }
      if (std::abs(d) > bound + tol) ++rep.case_violations;
      rep.c_prime = std::max(rep.c_prime, std::abs(d) / std::pow(R, alpha));
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace twistlab
