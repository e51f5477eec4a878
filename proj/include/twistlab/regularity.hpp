#pragma once

/*! @file regularity.hpp
    @brief Dirichlet-growth profiles phi(x0, r) = int_{B(x0,r)} |grad u|^2
           over dyadic radius ladders with Hoelder-exponent fits, the
           Caccioppoli ratio, the iteration (growth) lemma oracle and the
           annulus Poincare check

               int_{B2r \ Br} |u - u(x0)|^2 <= (7 r^2/3) int_{B2r \ Br} |grad u|^2.

    Ball membership is decided by element centroids, consistent with the
    twist module.  The radius ladder floors at 4x the mesh size, below which
    phi is quadrature noise. */

#include <vector>

#include "twistlab/grid.hpp"
#include "twistlab/rng.hpp"
#include "twistlab/types.hpp"

namespace twistlab {

struct DecayProfile {
  Vec2 x0 = Vec2::Zero();
  VecX radii;  // dyadic, descending from r_max, floored at 4 h_mesh
  VecX phi;
  Real alpha = 0;     // least-squares slope of log phi vs log r
  Real residual = 0;  // rms residual of the fit
  int used = 0;       // samples with phi > 0 entering the fit
};

/// Throws TooFewRadii when fewer than 3 ladder radii fit between 4 h_mesh
/// and r_max, or fewer than 3 carry positive phi.
DecayProfile dirichlet_growth(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                              Real r_max);

/// Same ladder for a scalar field (used by the shear xi diagnostics).
DecayProfile dirichlet_growth_scalar(const Mesh &mesh, const VecX &w, const Vec2 &x0,
                                     Real r_max);

struct CaccioppoliReport {
  Real D_in = 0;   // int_{B_r} |grad u|^2
  Real D_ann = 0;  // int_{B_2r \ B_r} |grad u|^2
  Real C_prime = 0;  // smallest C' with D_in <= C'(r^2 + D_ann)
};

CaccioppoliReport caccioppoli_ratio(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                                    Real r);

//// Synthetic nondecreasing phi on a dyadic grid r_k = r1 2^-k satisfying
//// phi(r) <= c r^p + mu phi(2r).
struct GrowthLemmaCase {
  Real c = 0, mu = 0, p = 1, r1 = 1;
  VecX radii;  // descending dyadic, radii[0] = r1
  VecX phi;
};

/// phi = r^p (requires c >= max(0, 1 - mu 2^p), the minimal feasible c).
GrowthLemmaCase growth_case_power(Real c, Real mu, Real p, Real r1, int levels);
/// phi generated by the recursion itself from phi(r1) = 1.
GrowthLemmaCase growth_case_recursion(Real c, Real mu, Real p, Real r1, int levels);

struct GrowthLemmaReport {
  Real alpha_prime = 0;  // log2(1/mu)
  Real ctilde = 0;       // c/(1-mu) ((2 r1)^(p/2) + (r1/2)^p r1^(-alpha'/2))
  Real min_slack = 0;    // min over dyadic r of bound(r) - phi(r)
  Real alpha_measured = 0;  // tail decay exponent of the synthetic phi
};

/// Verifies the explicit proof bound
///   phi(r) <= ctilde max(r^(p/2), r^(alpha'/2)) + 2^alpha' (r/r1)^alpha' phi(r1)
/// at every grid radius.  Throws HypothesisViolated if the case data fails
/// (iterant) or monotonicity on the grid.
GrowthLemmaReport growth_lemma_check(const GrowthLemmaCase &c);

struct PoincareReport {
  Real L = 0;      // int_ann |u - u(x0)|^2, exact edge-midpoint quadrature
  Real Rstar = 0;  // (7 r^2 / 3) int_ann |grad u|^2
  Real slack = 0;  // Rstar - L
  bool ok = false; // L <= Rstar (1 + slack_frac)
};

PoincareReport poincare_annulus_check(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                                      Real r, Real slack_frac = 0.10);

/// Nodal gaussian field smoothed by neighbour averaging; the random corpus
/// for the Poincare property test.
Mat2X random_smooth_field(const Mesh &mesh, Rng &rng, int smooth_passes = 2);

}  // namespace twistlab
