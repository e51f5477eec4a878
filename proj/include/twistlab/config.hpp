#pragma once

/*! @file config.hpp
    @brief Flat key=value run configuration, canonical hashing and the
           full-precision numeric formatting used by every artifact writer.

    Config files are UTF-8 text, one `key = value` per line, `#` comments.
    Unknown keys are rejected.  The effective configuration (file + CLI
    overrides) is serialized canonically and hashed with FNV-1a 64; the hash
    appears in the header line of every output file, so byte-identical
    reruns are checkable at a glance. */

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twistlab/types.hpp"

namespace twistlab {

inline const char *kToolVersion = "1.0.0";

struct RunConfig {
  std::string experiment = "run";

  // domain / mesh
  std::string domain = "square";  // square | disc
  int mesh_n = 128;
  Real rho0 = 1.0;

  // energy
  Real lambda = 1.0;
  std::string law = "paper";  // paper | general
  Real law_c1 = 0.5, law_c2 = 2.0, law_l = 0.2, law_m = 0.02, law_theta1 = 0.32;
  Real law_q1 = 1.0, law_q2 = 0.5;

  // boundary preset for solves
  std::string boundary = "identity";  // identity | affine | radial
  Real bnd_a11 = 1, bnd_a12 = 0, bnd_a21 = 0, bnd_a22 = 1, bnd_b1 = 0, bnd_b2 = 0;
  Real bnd_c0 = 0.5, bnd_c1 = 0.5;  // radial: u0 = (c0 + c1 |x|) x

  // analytic test map for twist / star / holder commands
  std::string map = "identity";  // identity | affine | radial_power | folded
  Real map_beta = 0.5;
  Real map_fold = 0.6;

  // solver
  int solver_max_iters = 2000;
  Real solver_grad_tol = 1e-8;
  Real solver_step0 = 0.25;
  Real solver_armijo = 1e-4;

  // diagnostics
  Real r_prime = 0.25;
  int center_stride = 4;
  int radii_count = 6;
  int n_theta = 256;
  Real r_max = 0.5;
  int centers_n = 3;        // centers_n x centers_n lattice of probe centers
  Real center_extent = 0.4; // lattice spans [-extent, extent]^2
  std::vector<Real> eps_ladder = {-1e-2, -1e-3, -1e-4};
  Real var_r = 0.25;
  Real var_eps = -0.1;
  Real cacc_cap = 1.0;  // hole-filling constant C/(1+C) stays below 1
  Real poincare_r = 0.25;
  int poincare_fields = 50;

  // shear
  Real shear_M = 1.0;
  Real shear_lip_weight = 10.0;
  std::string shear_profile = "oscillatory";  // zero | const | oscillatory | vee
  Real shear_phi_plus = 2.5, shear_phi_minus = -2.5, shear_osc = 0.3;
  bool shear_partial_boundary = false;

  // run plumbing
  std::uint64_t seed = 1;
  int threads = 1;

  /// All keys serialized as sorted `key=value` lines (%.17g numerics).
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Parse a config file.  Throws InvalidParams on unknown keys or bad values.
RunConfig load_config(const std::string &path);

/// Parse a single `key=value` override (CLI).
void apply_override(RunConfig &cfg, const std::string &key, const std::string &value);

std::uint64_t fnv1a64(const std::string &bytes);

/// Full-precision formatting used by every writer: %.17g.
std::string fmt(Real v);
std::string fmt(int v);
std::string fmt(std::uint64_t v);

}  // namespace twistlab
