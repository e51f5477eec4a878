#pragma once

/*! @file minimizer.hpp
    @brief First-order minimization with an infeasibility barrier.

    Gradient descent with a Barzilai-Borwein step proposal, a strict
    positivity guard (halve the step until no element inverts), then Armijo
    backtracking.  h'' blows up as det -> 0+, which makes curvature methods
    fragile here; a guarded first-order loop is robust and all we need for
    local minimizers.

    The loop is shared between the full elastic problem (nodal 2-vector
    fields) and the shear problem (nodal scalars) through the Problem
    concept below.  Every run is deterministic: fixed evaluation order, no
    randomness, stationarity measured in a mesh-size-independent norm. */

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twistlab/elastic_energy.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/types.hpp"

namespace twistlab {

struct SolveSettings {
  int max_iters = 500;
  Real grad_tol = 1e-8;  // on the area-weighted projected-gradient max-norm
  Real armijo = 1e-4;
  Real shrink = 0.5;
  Real step0 = 0.25;
  Real kappa = 0.5;  // feasibility fraction, recorded; the guard itself only
                     // requires det > 0 strictly
  int nonmonotone = 1;  // energy-reference window for the Armijo test.  1 is
                        // classic monotone descent.  Larger windows accept the
                        // raw BB step against the max of the last few energies
                        // (plus a roundoff allowance), which keeps the BB
                        // dynamics alive once energy differences drop below
                        // double-precision resolution.
};

struct IterRecord {
  int iter = 0;
  Real energy = 0;
  Real grad_norm = 0;
  Real step = 0;
  Real min_det = 0;
};

struct BoundaryData {
  enum class Kind { Identity, Affine, Radial, Table };
  Kind kind = Kind::Identity;
  Mat2 A = Mat2::Identity();
  Vec2 b = Vec2::Zero();
  Real radial_c0 = 0.5, radial_c1 = 0.5;  // u0(x) = (c0 + c1 |x|) x
  Mat2X table;                            // nodal values, used on Dirichlet nodes

  Vec2 eval(const Vec2 &x, int node = -1) const {
    switch (kind) {
      case Kind::Identity: return x;
      case Kind::Affine: return A * x + b;
      case Kind::Radial: return (radial_c0 + radial_c1 * x.norm()) * x;
      case Kind::Table: return table.col(node);
    }
    return x;
  }
};

/// Problem concept:
///   using State = ...;                      // an Eigen dense type
///   ExtReal value(const State &) const;
///   State gradient(const State &) const;    // zero on fixed nodes, throws
///                                           // InfeasibleState when infeasible
///   Real min_det(const State &) const;
///   Real stat_norm(const State &g) const;   // mesh-independent stationarity
template <class Problem>
struct DescendResult {
  typename Problem::State u;
  std::vector<IterRecord> trace;
  bool converged = false;
};

template <class Problem>
DescendResult<Problem> descend(const Problem &prob, typename Problem::State u,
                               const SolveSettings &st) {
  using State = typename Problem::State;
  DescendResult<Problem> out;
  if (!(prob.min_det(u) > 0)) throw InfeasibleStart("initial state has det <= 0");
  ExtReal e = prob.value(u);
  if (!e.is_finite()) throw InfeasibleStart("initial energy infinite");

  State u_prev, g_prev;
  bool have_prev = false;
  const int window = std::max(1, st.nonmonotone);
  std::vector<Real> recent{e.value};
  for (int k = 0; k <= st.max_iters; ++k) {
    const State g = prob.gradient(u);
    const Real gnorm = prob.stat_norm(g);
    IterRecord rec{k, e.value, gnorm, 0.0, prob.min_det(u)};
    if (gnorm <= st.grad_tol) {
      out.trace.push_back(rec);
      out.converged = true;
      break;
    }
    if (k == st.max_iters) {
      out.trace.push_back(rec);
      break;  // iteration cap, flagged via converged = false
    }

    // Barzilai-Borwein proposal (s.y / y.y), fallback to step0
    Real t = st.step0;
    if (have_prev) {
      const State s = u - u_prev;
      const State y = g - g_prev;
      const Real sy = s.cwiseProduct(y).sum();
      const Real yy = y.squaredNorm();
      if (sy > 0 && yy > 0) t = sy / yy;
      t = std::min(std::max(t, 1e-12), 1e6);
    }

    const Real gg = g.squaredNorm();
    const Real t_start = t;
    Real e_ref = e.value;
    for (const Real r : recent) e_ref = std::max(e_ref, r);
    const Real allow = window > 1 ? 4 * std::numeric_limits<Real>::epsilon() *
                                        std::max<Real>(1, std::abs(e_ref))
                                  : 0;
    bool accepted = false;
    while (t > 1e-16 * t_start) {
      const State trial = u - t * g;
      if (!(prob.min_det(trial) > 0)) {
        t *= 0.5;  // positivity guard
        continue;
      }
      const ExtReal et = prob.value(trial);
      if (et.is_finite() && et.value <= e_ref + allow - st.armijo * t * gg) {
        u_prev = u;
        g_prev = g;
        have_prev = true;
        u = trial;
        e = et;
        recent.push_back(e.value);
        if (static_cast<int>(recent.size()) > window) recent.erase(recent.begin());
        accepted = true;
        break;
      }
      t *= st.shrink;
    }
    if (!accepted) throw LineSearchStalled("step underflow before Armijo acceptance");
    rec.step = t;
    out.trace.push_back(rec);
  }
  out.u = u;
  return out;
}

//// The full elastic problem over nodal deformations.
class ElasticProblem {
 public:
  using State = Mat2X;

  ElasticProblem(const Mesh &mesh, EnergyConfig config)
      : mesh_(&mesh), config_(std::move(config)), lumped_(lumped_areas(mesh)) {}

  ExtReal value(const State &u) const { return energy(*mesh_, u, config_); }
  State gradient(const State &u) const { return energy_gradient(*mesh_, u, config_); }
  Real min_det(const State &u) const {
    Real md = std::numeric_limits<Real>::infinity();
    for (int t = 0; t < mesh_->nt(); ++t)
      md = std::min(md, element_state_one(*mesh_, u, t).det);
    return md;
  }
  Real stat_norm(const State &g) const {
    Real m = 0;
    for (int v = 0; v < mesh_->nv(); ++v)
      m = std::max(m, g.col(v).template lpNorm<Eigen::Infinity>() / lumped_[v]);
    return m;
  }

  static VecX lumped_areas(const Mesh &mesh) {
    VecX a = VecX::Zero(mesh.nv());
    for (int t = 0; t < mesh.nt(); ++t)
      for (int v = 0; v < 3; ++v) a[mesh.tris(v, t)] += mesh.area[t] / 3;
    return a;
  }

 private:
  const Mesh *mesh_;
  EnergyConfig config_;
  VecX lumped_;
};

struct SolveResult {
  Mat2X u;
  std::vector<IterRecord> trace;
  bool converged = false;
};

/// Impose boundary data (harmonic-style extension + feasibility repair when
/// u_init is not supplied), then descend.  Throws InfeasibleStart /
/// LineSearchStalled.
SolveResult minimize(const Mesh &mesh, const BoundaryData &boundary,
                     const EnergyConfig &config, const SolveSettings &settings);
SolveResult minimize_from(const Mesh &mesh, Mat2X u_init, const BoundaryData &boundary,
                          const EnergyConfig &config, const SolveSettings &settings);

/// Laplace extension of the Dirichlet data into the interior (the lambda
/// |grad u|^2 part alone), then blend interior values toward the identity
/// field until all dets are positive.
Mat2X initial_guess(const Mesh &mesh, const BoundaryData &boundary);

/// One guarded backtracking pass from u along `direction` (zero on Dirichlet
/// nodes).  Returns the accepted step (0 for a zero direction).
Real line_search(const Mesh &mesh, const Mat2X &u, const Mat2X &direction,
                 const EnergyConfig &config, const SolveSettings &settings);

}  // namespace twistlab
