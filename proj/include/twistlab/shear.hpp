#pragma once

/*! @file shear.hpp
    @brief Shear maps u_sigma(x) = (x1, x2 + sigma(x)) on the square Q.

    The Jacobian is affine in the field, det grad u_sigma = 1 + sigma_,2, so
    the energy of a shear map reduces to

        E(u_sigma) = int_Q lambda (2 + 2 sigma_,2 + |grad sigma|^2) + h(1 + sigma_,2) dx,

    and positivity of the determinant is the scalar constraint sigma_,2 > -1.
    Instead of a twist condition, regularity machinery here leans on the
    Lipschitz-in-x1 bound

        |sigma(x1,x2) - sigma(x1',x2)| <= M |x1 - x1'|,

    enforced during solves by a quadratic penalty on (|sigma_,1| - M)_+ and
    re-measured afterwards.  With C = 1 + M the one-sided excess fields

        xi_pm(x) = (sigma(x) - sigma(x0) -/+ C R)^{+/-},   R = |x - x0|,

    are stored unsigned (both >= 0); the support bounds say xi_+ vanishes
    below x0 and xi_- above it.  Outer variations

        sigma^{eps,+} = sigma + eps eta^2 xi_+,
        sigma^{eps,-} = sigma - eps eta^2 xi_-,

    for eps in (-1/2, 0) keep the determinant within

        det/2 <= det^{eps,pm} <= det + C'_pm |eps|,
        C'_pm = 1 + C + (c_f/r) ||sigma - sigma(x0) -/+ C R||_inf over B(x0,2r),

    and the stationarity inequality bounds the eps->0 energy slope by an
    integral of |h'(det)|/2 over {det > 1}.  All xi-weighted terms for the
    "-" branch carry a minus sign relative to the "+" branch; the unsigned
    storage makes that explicit. */

#include <functional>
#include <utility>
#include <vector>

#include "twistlab/elastic_energy.hpp"
#include "twistlab/energy_law.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/minimizer.hpp"
#include "twistlab/regularity.hpp"
#include "twistlab/types.hpp"

namespace twistlab {

struct ShearField {
  VecX sigma;       // nodal scalar on the square mesh
  Real M = 0;       // Lipschitz-in-x1 budget (config input)
  Real lambda = 1.0;
  EnergyLaw law;    // typically a GeneralLaw
};

/// det grad u_sigma = 1 + sigma_,2 per element.
VecX shear_det(const Mesh &mesh, const VecX &sigma);

/// +inf as soon as one element has 1 + sigma_,2 <= 0.
ExtReal shear_energy(const Mesh &mesh, const VecX &sigma, Real lambda,
                     const EnergyLaw &law);

/// sigma0(x) = ((1+x2)/2) phi_plus(x1) + ((1-x2)/2) phi_minus(x1), so
/// det = 1 + (phi_plus - phi_minus)/2.  Throws ProfileOrderViolated if
/// phi_plus < phi_minus at some mesh abscissa.
VecX boundary_from_profiles(const Mesh &mesh, const std::function<Real(Real)> &phi_plus,
                            const std::function<Real(Real)> &phi_minus);

/// Discrete (lipshear) constant: max element |sigma_,1|.  On this mesh each
/// element sigma_,1 is a horizontal-edge difference quotient, so this equals
/// the max over horizontal neighbour pairs of |dsigma| / dx1.
Real measured_lipschitz(const Mesh &mesh, const VecX &sigma);

struct ShearSolveOptions {
  Real lip_weight = 10.0;        // quadratic penalty on (|sigma_,1| - M)_+
  bool partial_boundary = false; // fix only the top/bottom edges of Q
  int nonmonotone = 10;          // BB acceptance window (see SolveSettings)
};

struct ShearSolveResult {
  ShearField field;
  Real energy = 0;
  Real stat_norm = 0;
  Real min_det = 0;
  Real lip_measured = 0;  // post-hoc discrete (lipshear) constant
  Real lip_residual = 0;  // max element (|sigma_,1| - M)_+ at the solution
  bool converged = false;
  int iters = 0;
  std::vector<IterRecord> trace;
};

ShearSolveResult minimize_shear(const Mesh &mesh, const VecX &sigma0, Real M,
                                Real lambda, const EnergyLaw &law,
                                const SolveSettings &settings = {},
                                const ShearSolveOptions &opts = {});

struct XiFields {
  Vec2 x0 = Vec2::Zero();
  Real C = 1;        // 1 + M
  Real sigma0 = 0;   // sigma(x0)
  VecX xi_plus;      // nodal, (sigma - sigma(x0) - C R)_+
  VecX xi_minus;     // nodal, positive part of -(sigma - sigma(x0) + C R)
  std::vector<uint8_t> chi_plus, chi_minus;  // element support indicators
  int b3_violations = 0;  // supp xi_+ elements with centroid below x0
  int b4_violations = 0;  // supp xi_- elements with centroid above x0
};

XiFields xi_fields(const Mesh &mesh, const VecX &sigma, const Vec2 &x0, Real M);

struct ShearVariationReport {
  VecX sigma_eps;
  Real C_prime = 0;
  Real lower_margin = 0;  // min element det_eps - det/2
  Real upper_margin = 0;  // min element det + C'|eps| - det_eps
  Real b5_resid = 0;      // |det_eps - (det + eps * bump_,2)|, affine-in-eps identity
  Real min_det = 0;
};

/// sign = +1 varies with xi_+, sign = -1 with xi_-.  Throws BoundViolated
/// when a (detbounds) margin drops below -tol_bound * det scale.
ShearVariationReport build_shear_variation(const Mesh &mesh, const VecX &sigma,
                                           const VariationSpec &spec, int sign, Real M,
                                           Real tol_bound = 1e-9);

struct ShearProbeReport {
  Real lhs_plus = 0, rhs_plus = 0;
  Real lhs_minus = 0, rhs_minus = 0;
  std::vector<std::pair<Real, Real>> slopes_plus;   // (eps, (E(eps)-E)/eps)
  std::vector<std::pair<Real, Real>> slopes_minus;
  Real min_det = 0;
};

ShearProbeReport shear_inequality_probe(const Mesh &mesh, const VecX &sigma,
                                        const VariationSpec &spec, Real lambda,
                                        const EnergyLaw &law, Real M,
                                        const std::vector<Real> &eps_ladder = {-1e-2, -1e-3,
                                                                               -1e-4});

struct XiHolderReport {
  Vec2 x0 = Vec2::Zero();
  DecayProfile plus, minus;
  bool plus_fit = false, minus_fit = false;  // false when the field vanishes
  int case_upper = 0, case_band = 0, case_lower = 0;  // Step-2 case counts
  int case_violations = 0;  // |dsigma| <= xi + C R failures on sampled pairs
  Real c_prime = 0;         // max |dsigma| / R^alpha over sampled pairs
};

std::vector<XiHolderReport> xi_holder_diagnostics(const Mesh &mesh, const VecX &sigma,
                                                  const std::vector<Vec2> &x0_list,
                                                  Real M, Real r_max);

}  // namespace twistlab
