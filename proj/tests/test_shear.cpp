#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twistlab/elastic_energy.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/shear.hpp"

using namespace twistlab;

namespace {

EnergyLaw general_law() { return EnergyLaw(build_general_law(1.0, 0.5)); }

VecX smooth_sigma(const Mesh &mesh) {
  VecX s(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    const Real x1 = mesh.X(0, v), x2 = mesh.X(1, v);
    s[v] = 0.3 * std::sin(1.3 * x1 + 0.4) * std::cos(0.9 * x2);
  }
  return s;
}

}  // namespace

TEST_CASE("shear energy agrees with the full elastic energy of (x1, x2 + sigma)") {
  // |grad u_sigma|^2 = 2 + 2 sigma_,2 + |grad sigma|^2 elementwise
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 24);
  const VecX sigma = smooth_sigma(mesh);
  EnergyConfig cfg;
  cfg.law = general_law();

  Mat2X u(2, mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    u(0, v) = mesh.X(0, v);
    u(1, v) = mesh.X(1, v) + sigma[v];
  }
  const Real full = energy(mesh, u, cfg).as_double();
  const Real reduced = shear_energy(mesh, sigma, cfg.lambda, cfg.law).as_double();
  CHECK(reduced == doctest::Approx(full).epsilon(1e-12));

  // determinants coincide elementwise
  const VecX det = shear_det(mesh, sigma);
  const auto states = element_states(mesh, u);
  for (int e = 0; e < mesh.nt(); ++e)
    CHECK(det[e] == doctest::Approx(states[static_cast<size_t>(e)].det).epsilon(1e-13));
}

TEST_CASE("boundary_from_profiles: interpolation, determinant shift, ordering") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 16);
  const Real pp = 1.2, pm = -0.6;
  const VecX sigma = boundary_from_profiles(
      mesh, [=](Real) { return pp; }, [=](Real) { return pm; });
  // constant profiles give sigma affine in x2, det = 1 + (pp - pm)/2 exactly
  const VecX det = shear_det(mesh, sigma);
  for (int e = 0; e < mesh.nt(); ++e)
    CHECK(det[e] == doctest::Approx(1 + (pp - pm) / 2).epsilon(1e-14));

  CHECK_THROWS_AS(boundary_from_profiles(
                      mesh, [](Real) { return -1.0; }, [](Real) { return 1.0; }),
                  ProfileOrderViolated);
}

TEST_CASE("measured_lipschitz picks the x1 difference quotient") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 16);
  VecX sx1(mesh.nv()), sx2(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) {
    sx1[v] = 0.75 * mesh.X(0, v);
    sx2[v] = 2.0 * mesh.X(1, v);
  }
  CHECK(measured_lipschitz(mesh, sx1) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(measured_lipschitz(mesh, sx2) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("constant and linear shears are discrete critical points") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 16);
  const EnergyLaw law = general_law();

  const VecX flat = boundary_from_profiles(
      mesh, [](Real) { return 0.7; }, [](Real) { return 0.7; });
  const ShearSolveResult a = minimize_shear(mesh, flat, 1.0, 1.0, law);
  REQUIRE(a.converged);
  CHECK(a.iters <= 2);
  CHECK(a.min_det == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.energy == doctest::Approx(2.0 * mesh.total_area).epsilon(1e-12));
  CHECK(a.lip_measured <= 1e-12);

  // sigma = 0.5 x2: constant stress, det 1.5
  const VecX lin = boundary_from_profiles(
      mesh, [](Real) { return 0.5; }, [](Real) { return -0.5; });
  const ShearSolveResult b = minimize_shear(mesh, lin, 1.0, 1.0, law);
  REQUIRE(b.converged);
  CHECK(b.iters <= 2);
  CHECK(b.min_det == doctest::Approx(1.5).epsilon(1e-12));
  const Real density = 1.0 * (2 + 2 * 0.5 + 0.25) + law(1.5).as_double();
  CHECK(b.energy == doctest::Approx(density * mesh.total_area).epsilon(1e-12));
}

TEST_CASE("xi fields of sigma = 3 x2: cone supports on the correct side") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 32);
  VecX sigma(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) sigma[v] = 3.0 * mesh.X(1, v);
  const Vec2 x0(0.0, 0.0);
  const XiFields xi = xi_fields(mesh, sigma, x0, 1.0);
  CHECK(xi.C == doctest::Approx(2.0));
  CHECK(std::fabs(xi.sigma0) <= 1e-13);

  int plus_support = 0, minus_support = 0;
  for (int v = 0; v < mesh.nv(); ++v) {
    const Real R = (Vec2(mesh.X.col(v)) - x0).norm();
    const Real dev = sigma[v] - xi.sigma0;
    CHECK(xi.xi_plus[v] == doctest::Approx(std::max(dev - 2 * R, 0.0)).scale(1).epsilon(1e-13));
    CHECK(xi.xi_minus[v] ==
          doctest::Approx(std::max(-(dev + 2 * R), 0.0)).scale(1).epsilon(1e-13));
    CHECK(xi.xi_plus[v] >= 0);
    CHECK(xi.xi_minus[v] >= 0);
    if (xi.xi_plus[v] > 0) {
      ++plus_support;
      CHECK(mesh.X(1, v) > 0);  // (b3): excess only above x0
    }
    if (xi.xi_minus[v] > 0) {
      ++minus_support;
      CHECK(mesh.X(1, v) < 0);  // (b4)
    }
  }
  CHECK(plus_support > 0);
  CHECK(minus_support > 0);
  CHECK(xi.b3_violations == 0);
  CHECK(xi.b4_violations == 0);
}

TEST_CASE("xi fields are invariant under vertical translation of sigma") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 24);
  const VecX sigma = smooth_sigma(mesh);
  VecX shifted = sigma;
  shifted.array() += 5.0;
  const XiFields a = xi_fields(mesh, sigma, Vec2(0.1, -0.2), 1.0);
  const XiFields b = xi_fields(mesh, shifted, Vec2(0.1, -0.2), 1.0);
  CHECK((a.xi_plus - b.xi_plus).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((a.xi_minus - b.xi_minus).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("shear variation: (b5) identity and determinant bounds") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 32);
  VecX sigma(mesh.nv());
  for (int v = 0; v < mesh.nv(); ++v) sigma[v] = 3.0 * mesh.X(1, v);
  VariationSpec spec;
  spec.x0 = Vec2(0.0, 0.0);
  spec.r = 0.2;
  spec.eps = -0.1;
  for (const int sign : {+1, -1}) {
    ShearVariationReport rep;
    REQUIRE_NOTHROW(rep = build_shear_variation(mesh, sigma, spec, sign, 1.0));
    CHECK(rep.b5_resid <= 1e-13);
    CHECK(rep.min_det > 0);
    CHECK(rep.C_prime >= 1 + 2.0);  // 1 + C at minimum
    CHECK(rep.lower_margin >= -1e-9);
    CHECK(rep.upper_margin >= -1e-9);
    CHECK(rep.sigma_eps.size() == sigma.size());
  }
}

TEST_CASE("oscillatory solve: convergence, (lipshear), xi diagnostics, (eshear)") {
  const Mesh mesh = make_mesh(Mesh::Domain::Square, 32);
  const EnergyLaw law = general_law();
  const Real M = 1.0;
  const VecX sigma0 = boundary_from_profiles(
      mesh, [](Real x1) { return 0.3 * std::sin(M_PI * x1) + 2.5; },
      [](Real) { return -2.5; });
  SolveSettings st;
  st.max_iters = 4000;
  const ShearSolveResult res = minimize_shear(mesh, sigma0, M, 1.0, law, st);
  REQUIRE(res.converged);
  CHECK(res.min_det > 0);
  CHECK(res.stat_norm <= 1e-8);
  // |phi'| = 0.3 pi < M on the fixed edges, so the penalty never engages
  CHECK(res.lip_measured < M);
  CHECK(res.lip_residual == 0.0);

  const std::vector<Vec2> centers = {Vec2(0, 0), Vec2(0.25, 0.1), Vec2(-0.3, -0.2)};
  const auto reports = xi_holder_diagnostics(mesh, res.field.sigma, centers, M, 0.4);
  REQUIRE(reports.size() == centers.size());
  for (const auto &rep : reports) {
    CHECK(rep.case_violations == 0);
    if (rep.plus_fit) CHECK(rep.plus.alpha > 0);
    if (rep.minus_fit) CHECK(rep.minus.alpha > 0);
  }

  VariationSpec spec;
  spec.x0 = Vec2(0.0, 0.0);
  spec.r = 0.25;
  const ShearProbeReport probe =
      shear_inequality_probe(mesh, res.field.sigma, spec, 1.0, law, M);
  CHECK(probe.lhs_plus <= probe.rhs_plus + 1e-9);
  CHECK(probe.lhs_minus <= probe.rhs_minus + 1e-9);
  CHECK(probe.min_det > 0);
  for (const auto &[eps, slope] : probe.slopes_plus) {
    CHECK(eps < 0);
    CHECK(slope <= 1e-5);
  }
  for (const auto &[eps, slope] : probe.slopes_minus) CHECK(slope <= 1e-5);
}
