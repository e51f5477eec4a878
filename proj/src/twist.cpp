#include "twistlab/twist.hpp"

#include <algorithm>
#include <cmath>

#include "twistlab/errors.hpp"

namespace twistlab {

TwistField twist_field(const Mesh &mesh, const Mat2X &u, const Vec2 &x0) {
  TwistField out;
  out.x0 = x0;
  out.t.setZero(mesh.nt());
  out.valid.assign(mesh.nt(), 1);
  const Vec2 a = interpolate(mesh, u, x0);
  std::vector<Real> mags;
  mags.reserve(mesh.nt());
  for (int t = 0; t < mesh.nt(); ++t) {
    const Vec2 c = mesh.centroid.col(t);
    const Real R = (c - x0).norm();
    if (R < 1e-14) {
      out.valid[t] = 0;
      continue;
    }
    const auto tri = mesh.tris.col(t);
    const Vec2 uc = (u.col(tri[0]) + u.col(tri[1]) + u.col(tri[2])) / 3;
    const ElementState st = element_state_one(mesh, u, t);
    out.t[t] = (st.adj * (uc - a)).dot((c - x0) / R);
    mags.push_back(std::fabs(out.t[t]));
  }
  if (!mags.empty()) {
    auto mid = mags.begin() + mags.size() / 2;
    std::nth_element(mags.begin(), mid, mags.end());
    out.scale = *mid;
  }
  return out;
}

TwistReport twist_ball_report(const Mesh &mesh, const Mat2X &u, const TwistField &field,
                              Real r_prime) {
  (void)u;
  TwistReport rep;
  rep.x0 = field.x0;
  rep.r_prime = r_prime;
  rep.min_twist = std::numeric_limits<Real>::infinity();
  for (int t = 0; t < mesh.nt(); ++t) {
    if (!field.valid[t]) continue;
    if ((Vec2(mesh.centroid.col(t)) - field.x0).norm() > r_prime) continue;
    ++rep.elements;
    rep.min_twist = std::min(rep.min_twist, field.t[t]);
    rep.violation += mesh.area[t] * std::max(-field.t[t], 0.0);
  }
  if (rep.elements == 0) rep.min_twist = 0;
  return rep;
}

PenaltyResult penalty(const Mesh &mesh, const Mat2X &u, const Region &omega_prime,
                      Real r_prime, int center_stride) {
  if (!(r_prime > 0) || center_stride < 1) throw InvalidParams("penalty: bad r' or stride");
  PenaltyResult res;
  for (int v = 0; v < mesh.nv(); v += center_stride) {
    const Vec2 x0 = mesh.X.col(v);
    if (!omega_prime.contains(x0)) continue;
    // keep B(x0, r') inside the domain
    Real dist_bd;
    if (mesh.domain == Mesh::Domain::Square)
      dist_bd = std::min({1 - std::fabs(x0.x()), 1 - std::fabs(x0.y())});
    else
      dist_bd = mesh.rho0 - x0.norm();
    if (dist_bd <= r_prime) continue;
    const TwistField field = twist_field(mesh, u, x0);
    res.breakdown.push_back(twist_ball_report(mesh, u, field, r_prime));
    res.value += res.breakdown.back().violation;
  }
  if (res.breakdown.empty())
    throw InvalidParams("penalty: no admissible center (r' too large for Omega')");
  return res;
}

StarShapeProfile star_profile(const Mesh &mesh, const Mat2X &u, const Vec2 &x0, Real R,
                              int n_theta, Real rho_tol) {
  if (n_theta < 64) throw InvalidParams("star_profile: n_theta >= 64 required");
  StarShapeProfile prof;
  prof.x0 = x0;
  prof.R = R;
  const int N = n_theta;
  prof.theta.resize(N + 1);
  prof.rho.resize(N + 1);
  prof.sigma.resize(N + 1);
  const Vec2 a = interpolate(mesh, u, x0);

  VecX raw(N + 1);
  prof.min_rho = std::numeric_limits<Real>::infinity();
  for (int k = 0; k <= N; ++k) {
    const Real th = 2 * M_PI * k / N;
    const Vec2 p = x0 + R * Vec2(std::cos(th), std::sin(th));
    if (!mesh.contains(p, 1e-9))
      throw InvalidParams("star_profile: S(x0,R) leaves the domain");
    const Vec2 w = interpolate(mesh, u, p) - a;
    prof.theta[k] = th;
    prof.rho[k] = w.norm();
    prof.min_rho = std::min(prof.min_rho, prof.rho[k]);
    raw[k] = std::atan2(w.y(), w.x());
  }
  if (prof.min_rho <= rho_tol)
    throw OriginOnCurve("star_profile: u(x0) lies on the sampled curve");

  prof.sigma[0] = raw[0];
  prof.margin = std::numeric_limits<Real>::infinity();
  for (int k = 0; k < N; ++k) {
    Real jump = raw[k + 1] - raw[k];
    jump -= 2 * M_PI * std::round(jump / (2 * M_PI));
    if (std::fabs(jump) >= M_PI - 1e-9)
      throw UnwrapAmbiguous("star_profile: angular step >= pi, undersampled");
    prof.sigma[k + 1] = prof.sigma[k] + jump;
    prof.margin = std::min(prof.margin, jump);
  }
  prof.winding = (prof.sigma[N] - prof.sigma[0]) / (2 * M_PI);
  return prof;
}

EquivalenceReport equivalence_probe(const Mesh &mesh, const Mat2X &u, const Vec2 &x0,
                                    Real r_prime, int radii_count, int n_theta) {
  if (radii_count < 1) throw InvalidParams("equivalence_probe: radii_count >= 1");
  EquivalenceReport rep;
  const TwistField field = twist_field(mesh, u, x0);
  const Real tol_t = twist_tol(field);
  const Real step = r_prime / (radii_count + 1);
  const Real shell = std::max(step / 2, mesh.h_mesh);
  for (int j = 1; j <= radii_count; ++j) {
    EquivalenceRow row;
    row.R = step * j;
    row.min_twist = std::numeric_limits<Real>::infinity();
    for (int t = 0; t < mesh.nt(); ++t) {
      if (!field.valid[t]) continue;
      const Real d = (Vec2(mesh.centroid.col(t)) - x0).norm();
      if (std::fabs(d - row.R) <= shell) row.min_twist = std::min(row.min_twist, field.t[t]);
    }
    if (!std::isfinite(row.min_twist)) row.min_twist = 0;
    row.twist_ok = row.min_twist >= -tol_t;
    try {
      const StarShapeProfile prof = star_profile(mesh, u, x0, row.R, n_theta);
      row.star_margin = prof.margin;
      row.star_ok = prof.margin >= -1e-8;
    } catch (const Error &) {
      // degenerate profile counts as a star failure
      row.profile_valid = false;
      row.star_margin = -std::numeric_limits<Real>::infinity();
      row.star_ok = false;
    }
    (row.twist_ok == row.star_ok ? rep.agree : rep.disagree)++;
    rep.rows.push_back(row);
  }
  rep.disagreement_rate = static_cast<Real>(rep.disagree) / rep.rows.size();
  return rep;
}

}  // namespace twistlab
