#pragma once

/*! @file elastic_energy.hpp
    @brief The stored energy

        E(u) = int_Omega  lambda |grad u|^2 + h(det grad u),

    its discrete gradient, the outer variations

        u^eps(x) = u(x) + eps eta^2(x) (u(x) - a),   a = u(x0),
        eta(x) = f(|x - x0|),

    and the determinant expansion / bound checks they satisfy under
    nonnegative twist:

        det grad u^eps = (1 + eps eta^2)^2 det grad u
                         + 2 eps f'(R) eta (1 + eps eta^2) t(x, x0, u)

    with det grad u^eps >= det grad u / 4 for -1/2 < eps <= 0.

    Note on the companion upper inequality "det grad u^eps <= det grad u":
    the cross term above is nonnegative under the same hypotheses, so the
    upper direction can fail pointwise (it does for the identity map at
    mid-annulus); it is reported as a signed slack, not asserted.

    Discretization conventions (used identically on both sides of every
    checked identity): eta sampled at nodes, element value = nodal mean;
    R and twist sampled at centroids. */

#include <vector>

#include "twistlab/energy_law.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/types.hpp"

namespace twistlab {

struct EnergyConfig {
  Real lambda = 1.0;
  EnergyLaw law;
};

/// Sum over elements of area (lambda |grad u|_F^2 + h(det)); infinite as soon
/// as one element inverts.  Deterministic fixed-order reduction.
ExtReal energy(const Mesh &mesh, const Mat2X &u, const EnergyConfig &config);

/// Nodal gradient of the element sum, rows zeroed on Dirichlet nodes.
/// Per-element integrand derivative: 2 lambda grad u + h'(det) cof grad u.
/// Throws InfeasibleState if any element det <= 0.
Mat2X energy_gradient(const Mesh &mesh, const Mat2X &u, const EnergyConfig &config);

/// C1 cubic smoothstep cutoff: 1 on [0,r], (1-t)^2(1+2t) with t=(R-r)/r on
/// [r,2r], 0 beyond; f' <= 0 and r sup|f'| = 1.5.
Real cutoff(Real R, Real r);
Real cutoff_prime(Real R, Real r);

/// r sup|(f^2)'| for the smoothstep (attained at t = 1/sqrt(10)).
inline const Real kCutoffSqSlope = 1.9804185706973974;

struct VariationSpec {
  Vec2 x0 = Vec2::Zero();
  Real r = 0.25;
  Real eps = -0.1;
};

/// u + eps eta^2 (u - a) nodewise.  Throws InvalidParams unless r > 0 and
/// B(x0, 2r) stays inside the domain.
Mat2X build_variation(const Mesh &mesh, const Mat2X &u, const VariationSpec &spec);

struct VariationBoundsReport {
  // (detblaue1) residual |det u^eps - expansion|, by element class
  Real resid_plateau_far = 0;  // elements with eta identically 1 resp. 0
  Real resid_all = 0;
  int plateau_elements = 0;
  int far_elements = 0;
  int mixed_elements = 0;
  // determinant bounds (absolute values, scale = max |det u| on B(x0,2r))
  Real lower_margin = 0;    // min det u^eps - det u / 4   (asserted >= -tol scale)
  Real bracket_margin = 0;  // min det u - (1+eps eta^2)^2 det u  (asserted)
  Real upper_slack = 0;     // min det u - det u^eps  (signed diagnostic)
  Real scale = 1;
  Real twist_min = 0;       // min twist over B(x0, 2r) (precondition input)
};

/// Verifies (detblaue1) and the determinant bounds element by element.
/// Preconditions: -1/2 < eps <= 0; twist >= -tol on B(x0,2r).
/// Throws BoundViolated when an asserted margin is negative beyond
/// tol_bound x scale.
VariationBoundsReport check_variation_bounds(const Mesh &mesh, const Mat2X &u,
                                             const VariationSpec &spec,
                                             Real tol_bound = 1e-9);

struct InequalityProbeReport {
  Real lhs = 0;
  Real rhs = 0;
  std::vector<std::pair<Real, Real>> slopes;  // (eps, (E(u^eps)-E(u))/eps)
  Real min_det_margin = 0;                    // min lower margin over the ladder
  Real twist_min = 0;
};

/// Evaluates both sides of the stationarity inequality
///   lambda int (eta^2 |grad u|^2 + grad u . ((u-a) (x) grad eta^2))
///     <= int_{det<1} eta^2 |h'(det)| det + int_{det>=1} eta t h'(det) |f'(R)|
/// plus one-sided energy difference quotients over the eps ladder.
InequalityProbeReport variational_inequality_probe(const Mesh &mesh, const Mat2X &u,
                                                   const VariationSpec &spec,
                                                   const EnergyConfig &config,
                                                   const std::vector<Real> &eps_ladder);

}  // namespace twistlab
