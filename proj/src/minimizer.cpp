#include "twistlab/minimizer.hpp"

#include <Eigen/Sparse>

#include <cmath>

namespace twistlab {

Mat2X initial_guess(const Mesh &mesh, const BoundaryData &boundary) {
  const int nv = mesh.nv();
  Mat2X u(2, nv);
  std::vector<int> free_id(nv, -1);
  int nfree = 0;
  for (int v = 0; v < nv; ++v) {
    if (mesh.dirichlet[v])
      u.col(v) = boundary.eval(mesh.X.col(v), v);
    else
      free_id[v] = nfree++;
  }
  if (nfree > 0) {
    // stiffness system for the Laplace part, Dirichlet rows eliminated
    using Trip = Eigen::Triplet<Real>;
    std::vector<Trip> trips;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nfree, 2);
    for (int t = 0; t < mesh.nt(); ++t) {
      const auto tri = mesh.tris.col(t);
      const Eigen::Matrix3d K =
          mesh.area[t] * mesh.G[t] * mesh.G[t].transpose();
      for (int i = 0; i < 3; ++i) {
        if (mesh.dirichlet[tri[i]]) continue;
        for (int j = 0; j < 3; ++j) {
          if (mesh.dirichlet[tri[j]])
            rhs.row(free_id[tri[i]]) -= K(i, j) * u.col(tri[j]).transpose();
          else
            trips.emplace_back(free_id[tri[i]], free_id[tri[j]], K(i, j));
        }
      }
    }
    Eigen::SparseMatrix<Real> A(nfree, nfree);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<Real>> solver(A);
    const Eigen::MatrixXd sol = solver.solve(rhs);
    for (int v = 0; v < nv; ++v)
      if (free_id[v] >= 0) u.col(v) = sol.row(free_id[v]).transpose();
  }

  auto min_det = [&](const Mat2X &w) {
    Real md = std::numeric_limits<Real>::infinity();
    for (int t = 0; t < mesh.nt(); ++t)
      md = std::min(md, element_state_one(mesh, w, t).det);
    return md;
  };
  if (min_det(u) > 0) return u;
  // repair: blend interior values toward the identity field
  for (int k = 1; k <= 16; ++k) {
    const Real beta = static_cast<Real>(k) / 16;
    Mat2X blend = u;
    for (int v = 0; v < nv; ++v)
      if (!mesh.dirichlet[v])
        blend.col(v) = (1 - beta) * u.col(v) + beta * mesh.X.col(v);
    if (min_det(blend) > 0) return blend;
  }
  throw InfeasibleStart("no feasible initial deformation found");
}

SolveResult minimize_from(const Mesh &mesh, Mat2X u_init, const BoundaryData &boundary,
                          const EnergyConfig &config, const SolveSettings &settings) {
  for (int v = 0; v < mesh.nv(); ++v)
    if (mesh.dirichlet[v]) u_init.col(v) = boundary.eval(mesh.X.col(v), v);
  ElasticProblem prob(mesh, config);
  auto res = descend(prob, std::move(u_init), settings);
  return {std::move(res.u), std::move(res.trace), res.converged};
}

SolveResult minimize(const Mesh &mesh, const BoundaryData &boundary,
                     const EnergyConfig &config, const SolveSettings &settings) {
  return minimize_from(mesh, initial_guess(mesh, boundary), boundary, config, settings);
}

Real line_search(const Mesh &mesh, const Mat2X &u, const Mat2X &direction,
                 const EnergyConfig &config, const SolveSettings &settings) {
  if (direction.cwiseAbs().maxCoeff() == 0) return 0;
  ElasticProblem prob(mesh, config);
  const ExtReal e0 = prob.value(u);
  if (!e0.is_finite()) throw InfeasibleStart("line_search from infeasible state");
  const Mat2X g = prob.gradient(u);
  const Real decrease = -g.cwiseProduct(direction).sum();
  Real t = settings.step0;
  const Real t_start = t;
  while (t > 1e-16 * t_start) {
    const Mat2X trial = u + t * direction;
    if (!(prob.min_det(trial) > 0)) {
      t *= 0.5;
      continue;
    }
    const ExtReal et = prob.value(trial);
    if (et.is_finite() && et.value <= e0.value - settings.armijo * t * decrease) return t;
    t *= settings.shrink;
  }
  throw LineSearchStalled("step underflow before Armijo acceptance");
}

}  // namespace twistlab
