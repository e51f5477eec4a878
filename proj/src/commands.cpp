#include "twistlab/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>
#include <vector>

#include "twistlab/elastic_energy.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/reduce.hpp"
#include "twistlab/regularity.hpp"
#include "twistlab/rng.hpp"
#include "twistlab/shear.hpp"
#include "twistlab/twist.hpp"

namespace twistlab {

namespace {

std::string hash_hex(const RunConfig &cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  return buf;
}

std::ofstream open_artifact(const std::string &path, const RunConfig &cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParams("cannot open output file " + path);
  out << "# twistlab " << kToolVersion << " config=" << hash_hex(cfg) << "\n";
  return out;
}

//// key = value accumulator for summary.txt; insertion order preserved.
class Summary {
 public:
  void put(const std::string &k, const std::string &v) { rows_.emplace_back(k, v); }
  void put(const std::string &k, const char *v) { rows_.emplace_back(k, v); }
  void put(const std::string &k, Real v) { rows_.emplace_back(k, fmt(v)); }
  void put(const std::string &k, int v) { rows_.emplace_back(k, fmt(v)); }
  void put(const std::string &k, bool v) { rows_.emplace_back(k, v ? "true" : "false"); }

  void write(const std::string &path, const RunConfig &cfg) const {
    auto out = open_artifact(path, cfg);
    for (const auto &[k, v] : rows_) out << k << " = " << v << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

SolveSettings settings_from_config(const RunConfig &cfg) {
  SolveSettings st;
  st.max_iters = cfg.solver_max_iters;
  st.grad_tol = cfg.solver_grad_tol;
  st.step0 = cfg.solver_step0;
  st.armijo = cfg.solver_armijo;
  return st;
}

void dump_field(const std::string &path, const RunConfig &cfg, const Mesh &mesh,
                const Mat2X &u) {
  auto out = open_artifact(path, cfg);
  out << "x,y,u1,u2\n";
  for (int v = 0; v < mesh.nv(); ++v)
    out << fmt(mesh.X(0, v)) << ',' << fmt(mesh.X(1, v)) << ',' << fmt(u(0, v)) << ','
        << fmt(u(1, v)) << "\n";
}

void dump_elements(const std::string &path, const RunConfig &cfg, const Mesh &mesh,
                   const Mat2X &u) {
  auto out = open_artifact(path, cfg);
  out << "cx,cy,det,grad11,grad12,grad21,grad22\n";
  for (int t = 0; t < mesh.nt(); ++t) {
    const ElementState s = element_state_one(mesh, u, t);
    out << fmt(mesh.centroid(0, t)) << ',' << fmt(mesh.centroid(1, t)) << ','
        << fmt(s.det) << ',' << fmt(s.grad(0, 0)) << ',' << fmt(s.grad(0, 1)) << ','
        << fmt(s.grad(1, 0)) << ',' << fmt(s.grad(1, 1)) << "\n";
  }
}

void dump_trace(const std::string &path, const RunConfig &cfg,
                const std::vector<IterRecord> &trace) {
  auto out = open_artifact(path, cfg);
  out << "iter,energy,grad_norm,step,min_det\n";
  for (const auto &r : trace)
    out << r.iter << ',' << fmt(r.energy) << ',' << fmt(r.grad_norm) << ','
        << fmt(r.step) << ',' << fmt(r.min_det) << "\n";
}

}  // namespace

Mesh mesh_from_config(const RunConfig &cfg) {
  if (cfg.domain == "square") return make_mesh(Mesh::Domain::Square, cfg.mesh_n);
  if (cfg.domain == "disc") return make_mesh(Mesh::Domain::Disc, cfg.mesh_n, cfg.rho0);
  throw InvalidParams("unknown domain '" + cfg.domain + "'");
}

EnergyLaw law_from_config(const RunConfig &cfg) {
  if (cfg.law == "paper")
    return EnergyLaw(
        build_paper_law(cfg.law_c1, cfg.law_c2, cfg.law_l, cfg.law_m, cfg.law_theta1));
  if (cfg.law == "general") return EnergyLaw(build_general_law(cfg.law_q1, cfg.law_q2));
  throw InvalidParams("unknown law '" + cfg.law + "'");
}

BoundaryData boundary_from_config(const RunConfig &cfg) {
  BoundaryData bd;
  if (cfg.boundary == "identity") {
    bd.kind = BoundaryData::Kind::Identity;
  } else if (cfg.boundary == "affine") {
    bd.kind = BoundaryData::Kind::Affine;
    bd.A << cfg.bnd_a11, cfg.bnd_a12, cfg.bnd_a21, cfg.bnd_a22;
    bd.b << cfg.bnd_b1, cfg.bnd_b2;
  } else if (cfg.boundary == "radial") {
    bd.kind = BoundaryData::Kind::Radial;
    bd.radial_c0 = cfg.bnd_c0;
    bd.radial_c1 = cfg.bnd_c1;
  } else {
    throw InvalidParams("unknown boundary preset '" + cfg.boundary + "'");
  }
  return bd;
}

Mat2X map_from_config(const RunConfig &cfg, const Mesh &mesh) {
  if (cfg.map == "identity") return identity_field(mesh);
  if (cfg.map == "affine") {
    Mat2 A;
    A << cfg.bnd_a11, cfg.bnd_a12, cfg.bnd_a21, cfg.bnd_a22;
    const Vec2 b(cfg.bnd_b1, cfg.bnd_b2);
    return sample_map(mesh, [&](const Vec2 &x) { return Vec2(A * x + b); });
  }
  if (cfg.map == "radial_power") {
    const Real beta = cfg.map_beta;
    return sample_map(mesh, [&](const Vec2 &x) {
      const Real r = x.norm();
      return r == 0 ? Vec2(Vec2::Zero()) : Vec2(std::pow(r, beta - 1) * x);
    });
  }
  if (cfg.map == "folded") {
    // z + A conj(z)^2: orientation flips where 2A|x| > 1, so circle images
    // around off-centre points fold and lose star-shapedness.
    const Real A = cfg.map_fold;
    return sample_map(mesh, [&](const Vec2 &x) {
      return Vec2(x[0] + A * (x[0] * x[0] - x[1] * x[1]), x[1] - 2 * A * x[0] * x[1]);
    });
  }
  throw InvalidParams("unknown map preset '" + cfg.map + "'");
}

std::vector<Vec2> centers_from_config(const RunConfig &cfg) {
  std::vector<Vec2> out;
  const int n = cfg.centers_n;
  if (n < 1) throw InvalidParams("centers_n must be >= 1");
  const Real e = cfg.center_extent;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Real fx = n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1);
      const Real fy = n == 1 ? 0.0 : -1.0 + 2.0 * j / (n - 1);
      out.emplace_back(e * fx, e * fy);
    }
  return out;
}

namespace {

int cmd_build_law(const RunConfig &cfg, const std::string &dir) {
  const EnergyLaw law = law_from_config(cfg);
  {
    auto out = open_artifact(dir + "/law.csv", cfg);
    out << "s,h,hprime\n";
    const int npts = 241;
    for (int i = 0; i < npts; ++i) {
      const Real s = std::pow(10.0, -3.0 + 5.0 * i / (npts - 1));
      out << fmt(s) << ',' << fmt(law(s).as_double()) << ',' << fmt(law.prime(s))
          << "\n";
    }
  }

  Summary sm;
  sm.put("command", "build-law");
  sm.put("law", cfg.law);
  bool ok = true;

  // branch continuity / C1 joints, evaluated from the branch formulas
  Real joint_dev = 0;
  if (law.is_paper()) {
    const PaperLaw &pl = law.paper();
    joint_dev = std::max({std::abs(pl.theta(pl.c1) - std::abs(std::log(pl.c1))),
                          std::abs(pl.theta(pl.c2) - (pl.l * pl.c2 + pl.m)),
                          std::abs(pl.theta_prime(pl.c1) - (-1 / pl.c1)),
                          std::abs(pl.theta_prime(pl.c2) - pl.l),
                          std::abs(pl.theta(1.0) - pl.theta1),
                          std::abs(pl.theta_prime(1.0))});
    sm.put("theta1", pl.theta1);
    sm.put("hprime_at_c1", law.prime(pl.c1));
  } else {
    const GeneralLaw &gl = law.general();
    sm.put("K", gl.K);
    sm.put("s0", gl.s0);
  }
  sm.put("h_at_1", law(1.0).as_double());
  sm.put("hprime_at_1", law.prime(1.0));
  sm.put("joint_dev_max", joint_dev);
  ok = ok && joint_dev <= 1e-10 && law.prime(1.0) == 0;

  // chord convexity over a seeded log-uniform corpus
  Rng rng(cfg.seed);
  int viol = 0;
  for (int i = 0; i < 10000; ++i) {
    const Real a = std::exp(rng.uniform(std::log(1e-2), std::log(20.0)));
    const Real b = std::exp(rng.uniform(std::log(1e-2), std::log(20.0)));
    const Real ha = law(a).as_double(), hb = law(b).as_double();
    const Real hm = law(0.5 * (a + b)).as_double();
    const Real scale = std::max({1.0, std::abs(ha), std::abs(hb)});
    if (hm > 0.5 * (ha + hb) + 1e-12 * scale) ++viol;
  }
  sm.put("convex_violations", viol);
  ok = ok && viol == 0;

  sm.put("status", ok ? "pass" : "fail");
  sm.write(dir + "/summary.txt", cfg);
  return ok ? 0 : 1;
}

int cmd_minimize(const RunConfig &cfg, const std::string &dir) {
  const Mesh mesh = mesh_from_config(cfg);
  EnergyConfig ec;
  ec.lambda = cfg.lambda;
  ec.law = law_from_config(cfg);
  const SolveResult res =
      minimize(mesh, boundary_from_config(cfg), ec, settings_from_config(cfg));

  dump_field(dir + "/field.csv", cfg, mesh, res.u);
  dump_elements(dir + "/elements.csv", cfg, mesh, res.u);
  dump_trace(dir + "/trace.csv", cfg, res.trace);

  Real min_det = std::numeric_limits<Real>::infinity();
  for (int t = 0; t < mesh.nt(); ++t)
    min_det = std::min(min_det, element_state_one(mesh, res.u, t).det);

  Summary sm;
  sm.put("command", "minimize");
  sm.put("energy", energy(mesh, res.u, ec).as_double());
  sm.put("grad_norm", res.trace.empty() ? 0.0 : res.trace.back().grad_norm);
  sm.put("min_det", min_det);
  sm.put("iters", res.trace.empty() ? 0 : res.trace.back().iter);
  sm.put("converged", res.converged);
  const bool ok = res.converged && min_det > 0;
  sm.put("status", ok ? "pass" : "fail");
  sm.write(dir + "/summary.txt", cfg);
  return ok ? 0 : 1;
}

int cmd_twist_report(const RunConfig &cfg, const std::string &dir) {
  const Mesh mesh = mesh_from_config(cfg);
  const Mat2X u = map_from_config(cfg, mesh);

  const Region omega = cfg.domain == "disc"
                           ? Region::ball(Vec2::Zero(), cfg.rho0)
                           : Region::rect(Vec2(-1, -1), Vec2(1, 1));
  const PenaltyResult pen = penalty(mesh, u, omega, cfg.r_prime, cfg.center_stride);
  {
    auto out = open_artifact(dir + "/penalty.csv", cfg);
    out << "x0x,x0y,violation\n";
    for (const auto &rep : pen.breakdown)
      out << fmt(rep.x0[0]) << ',' << fmt(rep.x0[1]) << ',' << fmt(rep.violation)
          << "\n";
  }

  int star_errors = 0;
  const auto centers = centers_from_config(cfg);
  for (size_t k = 0; k < centers.size(); ++k) {
    try {
      const StarShapeProfile p =
          star_profile(mesh, u, centers[k], cfg.r_prime / 2, cfg.n_theta);
      auto out = open_artifact(dir + "/star_" + std::to_string(k) + ".csv", cfg);
      out << "theta,rho,sigma\n";
      for (int i = 0; i < p.theta.size(); ++i)
        out << fmt(p.theta[i]) << ',' << fmt(p.rho[i]) << ',' << fmt(p.sigma[i])
            << "\n";
    } catch (const Error &) {
      ++star_errors;
    }
  }

  Real min_twist = std::numeric_limits<Real>::infinity();
  for (const auto &rep : pen.breakdown) min_twist = std::min(min_twist, rep.min_twist);

  Summary sm;
  sm.put("command", "twist-report");
  sm.put("penalty", pen.value);
  sm.put("centers", static_cast<int>(pen.breakdown.size()));
  sm.put("min_twist", min_twist);
  sm.put("star_errors", star_errors);
  sm.put("status", "pass");
  sm.write(dir + "/summary.txt", cfg);
  return 0;
}

int cmd_star_check(const RunConfig &cfg, const std::string &dir) {
  const Mesh mesh = mesh_from_config(cfg);
  const Mat2X u = map_from_config(cfg, mesh);
  const auto centers = centers_from_config(cfg);

  int rows = 0, agree = 0, disagree = 0;
  auto out = open_artifact(dir + "/equivalence.csv", cfg);
  out << "x0x,x0y,R,min_twist,star_margin,twist_ok,star_ok,profile_valid\n";
  for (const Vec2 &x0 : centers) {
    const EquivalenceReport rep =
        equivalence_probe(mesh, u, x0, cfg.r_prime, cfg.radii_count, cfg.n_theta);
    for (const auto &row : rep.rows)
      out << fmt(x0[0]) << ',' << fmt(x0[1]) << ',' << fmt(row.R) << ','
          << fmt(row.min_twist) << ',' << fmt(row.star_margin) << ','
          << (row.twist_ok ? 1 : 0) << ',' << (row.star_ok ? 1 : 0) << ','
          << (row.profile_valid ? 1 : 0) << "\n";
    rows += static_cast<int>(rep.rows.size());
    agree += rep.agree;
    disagree += rep.disagree;
  }

  Summary sm;
  sm.put("command", "star-check");
  sm.put("rows", rows);
  sm.put("agree", agree);
  sm.put("disagree", disagree);
  sm.put("disagreement_rate", rows ? static_cast<Real>(disagree) / rows : 0.0);
  sm.put("status", "pass");
  sm.write(dir + "/summary.txt", cfg);
  return 0;
}

int cmd_holder_fit(const RunConfig &cfg, const std::string &dir) {
  const Mesh mesh = mesh_from_config(cfg);
  const Mat2X u = map_from_config(cfg, mesh);
  const auto centers = centers_from_config(cfg);

  int fit_errors = 0;
  Real alpha_min = std::numeric_limits<Real>::infinity(), alpha_max = 0, cacc_max = 0;
  auto alpha_out = open_artifact(dir + "/alpha.csv", cfg);
  alpha_out << "x0x,x0y,alpha,residual\n";
  for (size_t k = 0; k < centers.size(); ++k) {
    try {
      const DecayProfile p = dirichlet_growth(mesh, u, centers[k], cfg.r_max);
      auto out = open_artifact(dir + "/profile_" + std::to_string(k) + ".csv", cfg);
      out << "r,phi\n";
      for (int i = 0; i < p.radii.size(); ++i)
        out << fmt(p.radii[i]) << ',' << fmt(p.phi[i]) << "\n";
      alpha_out << fmt(centers[k][0]) << ',' << fmt(centers[k][1]) << ','
                << fmt(p.alpha) << ',' << fmt(p.residual) << "\n";
      alpha_min = std::min(alpha_min, p.alpha);
      alpha_max = std::max(alpha_max, p.alpha);
    } catch (const Error &) {
      ++fit_errors;
    }
    cacc_max =
        std::max(cacc_max, caccioppoli_ratio(mesh, u, centers[k], cfg.r_max / 2).C_prime);
  }

  // Poincare: closed-form identity case, then the random corpus.
  const Real pr = cfg.poincare_r;
  const PoincareReport pid =
      poincare_annulus_check(mesh, identity_field(mesh), Vec2::Zero(), pr);
  const Real l_exact = 7.5 * M_PI * std::pow(pr, 4);
  const Real identity_dev = std::abs(pid.L - l_exact) / l_exact;
  Rng rng(cfg.seed);
  int poincare_viol = 0;
  for (int i = 0; i < cfg.poincare_fields; ++i) {
    const Mat2X w = random_smooth_field(mesh, rng);
    if (!poincare_annulus_check(mesh, w, Vec2::Zero(), pr).ok) ++poincare_viol;
  }

  Summary sm;
  sm.put("command", "holder-fit");
  sm.put("centers", static_cast<int>(centers.size()));
  sm.put("alpha_min", alpha_min);
  sm.put("alpha_max", alpha_max);
  sm.put("fit_errors", fit_errors);
  sm.put("caccioppoli_max", cacc_max);
  sm.put("caccioppoli_cap", cfg.cacc_cap);
  sm.put("poincare_identity_dev", identity_dev);
  sm.put("poincare_violations", poincare_viol);
  const bool ok =
      poincare_viol == 0 && identity_dev <= 0.05 && cacc_max <= cfg.cacc_cap;
  sm.put("status", ok ? "pass" : "fail");
  sm.write(dir + "/summary.txt", cfg);
  return ok ? 0 : 1;
}

std::pair<std::function<Real(Real)>, std::function<Real(Real)>> shear_profiles(
    const RunConfig &cfg) {
  const Real pp = cfg.shear_phi_plus, pm = cfg.shear_phi_minus, osc = cfg.shear_osc;
  if (cfg.shear_profile == "zero")
    return {[](Real) { return 0.0; }, [](Real) { return 0.0; }};
  if (cfg.shear_profile == "const")
    return {[pp](Real) { return pp; }, [pm](Real) { return pm; }};
  if (cfg.shear_profile == "oscillatory")
    return {[pp, osc](Real x) { return osc * std::sin(M_PI * x) + pp; },
            [pm](Real) { return pm; }};
  if (cfg.shear_profile == "vee")
    return {[pp](Real x) { return pp * std::abs(x); },
            [pm](Real x) { return pm * std::abs(x); }};
  throw InvalidParams("unknown shear profile '" + cfg.shear_profile + "'");
}

int cmd_shear(const RunConfig &cfg, const std::string &dir) {
  if (cfg.domain != "square")
    throw InvalidParams("shear command requires domain = square");
  const Mesh mesh = mesh_from_config(cfg);
  const EnergyLaw law = law_from_config(cfg);
  const auto [pp, pm] = shear_profiles(cfg);
  const VecX sigma0 = boundary_from_profiles(mesh, pp, pm);

  ShearSolveOptions opts;
  opts.lip_weight = cfg.shear_lip_weight;
  opts.partial_boundary = cfg.shear_partial_boundary;
  const ShearSolveResult res = minimize_shear(mesh, sigma0, cfg.shear_M, cfg.lambda,
                                              law, settings_from_config(cfg), opts);
  const VecX &sigma = res.field.sigma;

  {
    auto out = open_artifact(dir + "/sigma.csv", cfg);
    out << "x,y,sigma\n";
    for (int v = 0; v < mesh.nv(); ++v)
      out << fmt(mesh.X(0, v)) << ',' << fmt(mesh.X(1, v)) << ',' << fmt(sigma[v])
          << "\n";
  }
  dump_trace(dir + "/trace.csv", cfg, res.trace);

  // diagnostics always use the measured Lipschitz constant
  const Real M = res.lip_measured;
  const auto centers = centers_from_config(cfg);
  {
    const XiFields xi = xi_fields(mesh, sigma, centers.front(), M);
    auto out = open_artifact(dir + "/xi.csv", cfg);
    out << "x,y,xi_plus,xi_minus\n";
    for (int v = 0; v < mesh.nv(); ++v)
      out << fmt(mesh.X(0, v)) << ',' << fmt(mesh.X(1, v)) << ',' << fmt(xi.xi_plus[v])
          << ',' << fmt(xi.xi_minus[v]) << "\n";
  }

  int b3 = 0, b4 = 0, case_viol = 0;
  Real xi_alpha_min = std::numeric_limits<Real>::infinity();
  bool any_fit = false;
  for (const auto &rep : xi_holder_diagnostics(mesh, sigma, centers, M, cfg.r_max)) {
    const XiFields xf = xi_fields(mesh, sigma, rep.x0, M);
    b3 += xf.b3_violations;
    b4 += xf.b4_violations;
    case_viol += rep.case_violations;
    if (rep.plus_fit) {
      xi_alpha_min = std::min(xi_alpha_min, rep.plus.alpha);
      any_fit = true;
    }
    if (rep.minus_fit) {
      xi_alpha_min = std::min(xi_alpha_min, rep.minus.alpha);
      any_fit = true;
    }
  }

  VariationSpec vs;
  vs.x0 = centers.front();
  vs.r = cfg.var_r;
  const ShearProbeReport probe =
      shear_inequality_probe(mesh, sigma, vs, cfg.lambda, law, M, cfg.eps_ladder);
  Real slope_max = -std::numeric_limits<Real>::infinity();
  for (const auto &[e, s] : probe.slopes_plus) slope_max = std::max(slope_max, s);
  for (const auto &[e, s] : probe.slopes_minus) slope_max = std::max(slope_max, s);

  Summary sm;
  sm.put("command", "shear");
  sm.put("energy", res.energy);
  sm.put("energy_start",
         shear_energy(mesh, sigma0, cfg.lambda, law).as_double());
  sm.put("stat_norm", res.stat_norm);
  sm.put("min_det", res.min_det);
  sm.put("iters", res.iters);
  sm.put("converged", res.converged);
  sm.put("lip_measured", res.lip_measured);
  sm.put("lip_residual", res.lip_residual);
  sm.put("b3_violations", b3);
  sm.put("b4_violations", b4);
  sm.put("case_violations", case_viol);
  sm.put("xi_alpha_min", any_fit ? xi_alpha_min : 0.0);
  sm.put("probe_lhs_plus", probe.lhs_plus);
  sm.put("probe_rhs_plus", probe.rhs_plus);
  sm.put("probe_lhs_minus", probe.lhs_minus);
  sm.put("probe_rhs_minus", probe.rhs_minus);
  sm.put("slope_max", slope_max);
  const bool ok =
      res.converged && res.min_det > 0 && b3 + b4 == 0 && case_viol == 0;
  sm.put("status", ok ? "pass" : "fail");
  sm.write(dir + "/summary.txt", cfg);
  return ok ? 0 : 1;
}

int cmd_verify(const RunConfig &cfg, const std::string &dir) {
  Summary sm;
  sm.put("command", "verify");
  int failed = 0;
  // a throwing check counts as a failure, not a command abort
  auto check = [&](const char *name, auto &&body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const Error &) {
      ok = false;
    }
    sm.put(std::string("check_") + name, ok ? "pass" : "fail");
    if (!ok) ++failed;
  };

  // law joints and convexity on the shipped preset
  check("law_joints", [&] {
    const PaperLaw pl = paper_preset();
    const Real joint_dev =
        std::max({std::abs(pl.theta(pl.c1) - std::abs(std::log(pl.c1))),
                  std::abs(pl.theta(pl.c2) - (pl.l * pl.c2 + pl.m)),
                  std::abs(pl.theta_prime(pl.c1) - (-1 / pl.c1)),
                  std::abs(pl.theta_prime(pl.c2) - pl.l),
                  std::abs(pl.theta(1.0) - pl.theta1),
                  std::abs(pl.theta_prime(1.0))});
    return joint_dev <= 1e-10;
  });
  check("law_convexity", [&] {
    const EnergyLaw law{paper_preset()};
    Rng rng(cfg.seed);
    int viol = 0;
    for (int i = 0; i < 10000; ++i) {
      const Real a = std::exp(rng.uniform(std::log(1e-2), std::log(20.0)));
      const Real b = std::exp(rng.uniform(std::log(1e-2), std::log(20.0)));
      const Real ha = law(a).as_double(), hb = law(b).as_double();
      if (law(0.5 * (a + b)).as_double() >
          0.5 * (ha + hb) + 1e-12 * std::max({1.0, std::abs(ha), std::abs(hb)}))
        ++viol;
    }
    return viol == 0;
  });

  // adjugate algebra and the affine twist identity
  check("adjugate_identity", [&] {
    Rng rng(cfg.seed + 1);
    Real dev = 0;
    for (int i = 0; i < 100; ++i) {
      Mat2 A;
      A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
      const Mat2 resid = adj2(A) * A - A.determinant() * Mat2::Identity();
      dev = std::max(dev, resid.cwiseAbs().maxCoeff() / (1 + A.squaredNorm()));
    }
    return dev <= 1e-12;
  });
  check("twist_affine", [&] {
    Rng rng(cfg.seed + 2);
    const Mesh mesh = make_mesh(Mesh::Domain::Square, 16);
    Real tdev = 0;
    for (int i = 0; i < 10; ++i) {
      Mat2 A;
      Real det = 0;
      do {
        A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        det = A.determinant();
      } while (det < 0.1 || det > 10);
      const Mat2X u = sample_map(mesh, [&](const Vec2 &x) { return Vec2(A * x); });
      const Vec2 x0(0.05, -0.1);
      const TwistField tf = twist_field(mesh, u, x0);
      for (int t = 0; t < mesh.nt(); ++t) {
        if (!tf.valid[static_cast<size_t>(t)]) continue;
        const Real R = (mesh.centroid.col(t) - x0).norm();
        tdev = std::max(tdev, std::abs(tf.t[t] - det * R) / std::max(1.0, det * R));
      }
    }
    return tdev <= 1e-10;
  });

  // growth lemma cases; the recursion uses c = 1/4 so that phi stays
  // monotone from phi(r1) = 1 even at mu = 0.9
  check("growth_lemma", [&] {
    bool ok = true;
    const std::vector<std::pair<Real, Real>> cases = {{0.5, 1}, {0.75, 2}, {0.9, 2}};
    for (const auto &[mu, p] : cases) {
      const GrowthLemmaReport rp =
          growth_lemma_check(growth_case_power(0.5, mu, p, 1.0, 40));
      const GrowthLemmaReport rr =
          growth_lemma_check(growth_case_recursion(0.25, mu, p, 1.0, 40));
      const Real ap = std::log2(1.0 / mu);
      ok = ok && std::abs(rp.alpha_prime - ap) <= 1e-12 && rp.min_slack >= 0 &&
           rr.min_slack >= 0 && rr.alpha_measured >= std::min(p / 2, ap / 2) - 0.05;
    }
    return ok;
  });

  // variation bounds on identity and affine fields
  check("variation_bounds", [&] {
    const Mesh mesh = mesh_from_config(cfg);
    bool ok = true;
    Mat2 A;
    A << 1.1, 0.2, 0.0, 0.9;
    const std::vector<Mat2X> fields = {
        identity_field(mesh),
        sample_map(mesh, [&](const Vec2 &x) { return Vec2(A * x); })};
    for (const auto &u : fields) {
      for (Real eps : {-0.4, -0.1, -0.01}) {
        VariationSpec spec;
        spec.r = cfg.var_r;
        spec.eps = eps;
        const auto rep = check_variation_bounds(mesh, u, spec);
        ok = ok && rep.resid_plateau_far <= 1e-9;
      }
    }
    return ok;
  });

  // Poincare closed-form identity case
  check("poincare_identity", [&] {
    const Mesh mesh = mesh_from_config(cfg);
    const Real r = cfg.poincare_r;
    const PoincareReport rep =
        poincare_annulus_check(mesh, identity_field(mesh), Vec2::Zero(), r);
    const Real l_exact = 7.5 * M_PI * std::pow(r, 4);
    return rep.ok && std::abs(rep.L - l_exact) / l_exact <= 0.05;
  });

  // stationarity probe on the identity field (its own minimizer)
  check("probe_identity", [&] {
    const Mesh mesh = mesh_from_config(cfg);
    EnergyConfig ec;
    ec.lambda = cfg.lambda;
    ec.law = law_from_config(cfg);
    VariationSpec spec;
    spec.r = cfg.var_r;
    const InequalityProbeReport rep = variational_inequality_probe(
        mesh, identity_field(mesh), spec, ec, cfg.eps_ladder);
    auto out = open_artifact(dir + "/probe.txt", cfg);
    out << "lhs = " << fmt(rep.lhs) << "\n";
    out << "rhs = " << fmt(rep.rhs) << "\n";
    bool slopes_ok = true;
    for (const auto &[e, s] : rep.slopes) {
      out << "slope_eps_" << fmt(e) << " = " << fmt(s) << "\n";
      slopes_ok = slopes_ok && s <= 1e-5;
    }
    out << "min_det_margin = " << fmt(rep.min_det_margin) << "\n";
    return slopes_ok && rep.lhs <= rep.rhs + 1e-9;
  });

  sm.put("checks_failed", failed);
  sm.put("status", failed == 0 ? "pass" : "fail");
  sm.write(dir + "/summary.txt", cfg);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int run_command(const std::string &cmd, const RunConfig &cfg,
                const std::string &out_dir) {
  set_thread_count(cfg.threads);
  std::filesystem::create_directories(out_dir);
  try {
    if (cmd == "build-law") return cmd_build_law(cfg, out_dir);
    if (cmd == "minimize") return cmd_minimize(cfg, out_dir);
    if (cmd == "twist-report") return cmd_twist_report(cfg, out_dir);
    if (cmd == "star-check") return cmd_star_check(cfg, out_dir);
    if (cmd == "holder-fit") return cmd_holder_fit(cfg, out_dir);
    if (cmd == "shear") return cmd_shear(cfg, out_dir);
    if (cmd == "verify") return cmd_verify(cfg, out_dir);
    throw InvalidParams("unknown command '" + cmd + "'");
  } catch (const Error &err) {
    Summary sm;
    sm.put("command", cmd);
    sm.put("status", "fail");
    sm.put("error", err.what());
    sm.write(out_dir + "/summary.txt", cfg);
    return 1;
  }
}

}  // namespace twistlab
