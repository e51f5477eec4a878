#include "twistlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "twistlab/errors.hpp"
#include "twistlab/reduce.hpp"

namespace twistlab {

namespace {
int g_threads = 1;
}

int thread_count() { return g_threads; }
void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }

std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::uint64_t fnv1a64(const std::string &bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Real to_real(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    Real r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception &) {
    throw InvalidParams("bad numeric value for " + key + ": '" + v + "'");
  }
}

int to_int(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    int r = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception &) {
    throw InvalidParams("bad integer value for " + key + ": '" + v + "'");
  }
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidParams("bad boolean value for " + key + ": '" + v + "'");
}

std::vector<Real> to_list(const std::string &key, const std::string &v) {
  std::vector<Real> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
  if (out.empty()) throw InvalidParams("empty list for " + key);
  return out;
}

// One table drives parsing, overrides and canonical serialization.
struct KeyBinding {
  const char *name;
  std::function<void(RunConfig &, const std::string &)> set;
  std::function<std::string(const RunConfig &)> get;
};

const std::vector<KeyBinding> &bindings() {
#define REAL_KEY(name, field)                                              \
  KeyBinding {                                                             \
    name, [](RunConfig &c, const std::string &v) { c.field = to_real(name, v); }, \
        [](const RunConfig &c) { return fmt(c.field); }                    \
  }
#define INT_KEY(name, field)                                               \
  KeyBinding {                                                             \
    name, [](RunConfig &c, const std::string &v) { c.field = to_int(name, v); }, \
        [](const RunConfig &c) { return fmt(c.field); }                    \
  }
#define STR_KEY(name, field)                                          \
  KeyBinding {                                                        \
    name, [](RunConfig &c, const std::string &v) { c.field = v; },    \
        [](const RunConfig &c) { return c.field; }                    \
  }
#define BOOL_KEY(name, field)                                              \
  KeyBinding {                                                             \
    name, [](RunConfig &c, const std::string &v) { c.field = to_bool(name, v); }, \
        [](const RunConfig &c) { return c.field ? "true" : "false"; }      \
  }
  static const std::vector<KeyBinding> table = {
      STR_KEY("experiment", experiment),
      STR_KEY("domain", domain),
      INT_KEY("mesh_n", mesh_n),
      REAL_KEY("rho0", rho0),
      REAL_KEY("lambda", lambda),
      STR_KEY("law", law),
      REAL_KEY("law_c1", law_c1),
      REAL_KEY("law_c2", law_c2),
      REAL_KEY("law_l", law_l),
      REAL_KEY("law_m", law_m),
      REAL_KEY("law_theta1", law_theta1),
      REAL_KEY("law_q1", law_q1),
      REAL_KEY("law_q2", law_q2),
      STR_KEY("boundary", boundary),
      REAL_KEY("bnd_a11", bnd_a11),
      REAL_KEY("bnd_a12", bnd_a12),
      REAL_KEY("bnd_a21", bnd_a21),
      REAL_KEY("bnd_a22", bnd_a22),
      REAL_KEY("bnd_b1", bnd_b1),
      REAL_KEY("bnd_b2", bnd_b2),
      REAL_KEY("bnd_c0", bnd_c0),
      REAL_KEY("bnd_c1", bnd_c1),
      STR_KEY("map", map),
      REAL_KEY("map_beta", map_beta),
      REAL_KEY("map_fold", map_fold),
      INT_KEY("solver_max_iters", solver_max_iters),
      REAL_KEY("solver_grad_tol", solver_grad_tol),
      REAL_KEY("solver_step0", solver_step0),
      REAL_KEY("solver_armijo", solver_armijo),
      REAL_KEY("r_prime", r_prime),
      INT_KEY("center_stride", center_stride),
      INT_KEY("radii_count", radii_count),
      INT_KEY("n_theta", n_theta),
      REAL_KEY("r_max", r_max),
      INT_KEY("centers_n", centers_n),
      REAL_KEY("center_extent", center_extent),
      KeyBinding{"eps_ladder",
                 [](RunConfig &c, const std::string &v) {
                   c.eps_ladder = to_list("eps_ladder", v);
                 },
                 [](const RunConfig &c) {
                   std::string s;
                   for (size_t i = 0; i < c.eps_ladder.size(); ++i)
                     s += (i ? "," : "") + fmt(c.eps_ladder[i]);
                   return s;
                 }},
      REAL_KEY("var_r", var_r),
      REAL_KEY("var_eps", var_eps),
      REAL_KEY("cacc_cap", cacc_cap),
      REAL_KEY("poincare_r", poincare_r),
      INT_KEY("poincare_fields", poincare_fields),
      REAL_KEY("shear_M", shear_M),
      REAL_KEY("shear_lip_weight", shear_lip_weight),
      STR_KEY("shear_profile", shear_profile),
      REAL_KEY("shear_phi_plus", shear_phi_plus),
      REAL_KEY("shear_phi_minus", shear_phi_minus),
      REAL_KEY("shear_osc", shear_osc),
      BOOL_KEY("shear_partial_boundary", shear_partial_boundary),
      KeyBinding{"seed",
                 [](RunConfig &c, const std::string &v) {
                   try {
                     size_t pos = 0;
                     c.seed = std::stoull(v, &pos);
                     if (pos != v.size()) throw std::invalid_argument(v);
                   } catch (const std::exception &) {
                     throw InvalidParams("bad seed value: '" + v + "'");
                   }
                 },
                 [](const RunConfig &c) { return fmt(c.seed); }},
      INT_KEY("threads", threads),
  };
#undef REAL_KEY
#undef INT_KEY
#undef STR_KEY
#undef BOOL_KEY
  return table;
}

}  // namespace

void apply_override(RunConfig &cfg, const std::string &key, const std::string &value) {
  for (const auto &b : bindings()) {
    if (key == b.name) {
      b.set(cfg, value);
      return;
    }
  }
  throw InvalidParams("unknown config key '" + key + "'");
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open config file '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw InvalidParams("config line " + std::to_string(lineno) +
                          " is not key=value: '" + s + "'");
    apply_override(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return cfg;
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  for (const auto &b : bindings()) kv[b.name] = b.get(*this);
  std::string out;
  for (const auto &[k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

}  // namespace twistlab
