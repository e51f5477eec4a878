#pragma once

/*! @file twist.hpp
    @brief The twist field

        t(x, x0, u) = adj(grad u)(x) (u(x) - u(x0)) . (x - x0)/|x - x0|,

    the penalty functional F(u, Omega', r') built from g(s) = max(-s, 0),
    star-shapedness profiles rho/sigma of circle images, and the probe for
    the equivalence "twist >= 0 on B(x0, r')  <=>  u(S(x0,R)) star-shaped
    w.r.t. u(x0) for a.e. R < r'".

    Twist values are sampled per element at the centroid (u(x) by centroid
    interpolation, grad u element-constant); sign decisions use the
    scale-aware tolerance 1e-8 x median |t|. */

#include <vector>

#include "twistlab/grid.hpp"
#include "twistlab/types.hpp"

namespace twistlab {

//// Per-element twist values relative to one center.
struct TwistField {
  Vec2 x0;
  VecX t;                           // per element; 0 where invalid
  std::vector<std::uint8_t> valid;  // 0 for elements whose centroid hits x0
  Real scale = 0;                   // median |t| over valid elements
};

TwistField twist_field(const Mesh &mesh, const Mat2X &u, const Vec2 &x0);

/// Scale-aware sign tolerance for a twist sample set.
inline Real twist_tol(const TwistField &f) { return 1e-8 * f.scale; }

//// Ball statistics of the twist around one center.
struct TwistReport {
  Vec2 x0;
  Real r_prime = 0;
  Real min_twist = 0;
  Real violation = 0;  // sum area * g(t) over elements in the ball
  int elements = 0;
};

TwistReport twist_ball_report(const Mesh &mesh, const Mat2X &u, const TwistField &field,
                              Real r_prime);

//// Omega' descriptor for the penalty functional.
struct Region {
  enum class Kind { Ball, Rect };
  Kind kind = Kind::Ball;
  Vec2 center = Vec2::Zero();
  Real radius = 0;                  // Ball
  Vec2 lo = Vec2::Zero(), hi = Vec2::Zero();  // Rect

  bool contains(const Vec2 &p) const {
    if (kind == Kind::Ball) return (p - center).norm() <= radius;
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
  static Region ball(const Vec2 &c, Real r) { return {Kind::Ball, c, r, {}, {}}; }
  static Region rect(const Vec2 &lo, const Vec2 &hi) {
    return {Kind::Rect, {}, 0, lo, hi};
  }
};

struct PenaltyResult {
  Real value = 0;
  std::vector<TwistReport> breakdown;  // one entry per center
};

/// F(u, Omega', r'): sum over mesh-node centers inside Omega' (stride-
/// subsampled, dist to the domain boundary > r') of the ball violation.
/// Throws InvalidParams when no admissible center exists.
PenaltyResult penalty(const Mesh &mesh, const Mat2X &u, const Region &omega_prime,
                      Real r_prime, int center_stride = 1);

//// Sampled image of the circle S(x0, R) under u, in polar form about u(x0).
struct StarShapeProfile {
  Vec2 x0;
  Real R = 0;
  VecX theta;   // n_theta + 1 samples, closing at 2 pi
  VecX rho;     // |u(x0 + R e(theta)) - u(x0)|
  VecX sigma;   // unwrapped angle
  Real winding = 0;        // (sigma(2pi) - sigma(0)) / 2pi
  Real margin = 0;         // min consecutive sigma increment
  Real min_rho = 0;
};

/// Throws OriginOnCurve if min rho <= rho_tol, UnwrapAmbiguous if a raw
/// angular jump reaches pi (undersampled profile), InvalidParams for
/// n_theta < 64 or S(x0,R) not inside the domain.
StarShapeProfile star_profile(const Mesh &mesh, const Mat2X &u, const Vec2 &x0, Real R,
                              int n_theta, Real rho_tol = 1e-12);

//// Lemma-2.4-style agreement table between the two criteria per radius.
struct EquivalenceRow {
  Real R = 0;
  Real min_twist = 0;     // over the annulus shell near R
  Real star_margin = 0;   // sigma monotonicity margin at R
  bool twist_ok = false;
  bool star_ok = false;
  bool profile_valid = true;  // false if the profile degenerated
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  int agree = 0;
  int disagree = 0;
  Real disagreement_rate = 0;
};

EquivalenceReport equivalence_probe(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                                    Real r_prime, int radii_count, int n_theta);

}  // namespace twistlab
