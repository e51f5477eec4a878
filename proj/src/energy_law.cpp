#include "twistlab/energy_law.hpp"

#include <cmath>
#include <sstream>

#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

// Solve  int_p^q psi = m0,  int_p^q t psi = m1  for affine psi = a + b t.
Vec2 solve_moments(Real p, Real q, Real m0, Real m1) {
  Mat2 M;
  M << q - p, (q * q - p * p) / 2, (q * q - p * p) / 2, (q * q * q - p * p * p) / 3;
  return M.fullPivLu().solve(Vec2(m0, m1));
}

void require_positive_on(const Vec2 &psi, Real p, Real q, const char *name) {
  // affine => positivity on [p,q] is positivity at the endpoints
  const Real vp = psi[0] + psi[1] * p;
  const Real vq = psi[0] + psi[1] * q;
  if (vp <= 0 || vq <= 0) {
    std::ostringstream os;
    os << name << " not positive on [" << p << "," << q << "]: endpoint values "
       << vp << ", " << vq;
    throw InfeasibleLaw(os.str());
  }
}

}  // namespace

PaperLaw build_paper_law(Real c1, Real c2, Real l, Real m, Real theta1) {
  if (!(c1 > 0 && c1 < 1 && c2 > 1)) throw InvalidParams("need 0 < c1 < 1 < c2");
  if (!(l > 0)) throw InvalidParams("need l > 0");
  if (!(l * c2 + m > 0)) throw InvalidParams("need l c2 + m > 0");
  if (!(theta1 > m + l)) throw InvalidParams("need theta1 > m + l");

  PaperLaw law;
  law.c1 = c1;
  law.c2 = c2;
  law.l = l;
  law.m = m;
  law.theta1 = theta1;
  law.psi1 = solve_moments(c1, 1.0, 1.0 / c1, 1.0 - theta1 - std::log(c1));
  law.psi2 = solve_moments(1.0, c2, l, theta1 - m);
  require_positive_on(law.psi1, c1, 1.0, "psi1");
  require_positive_on(law.psi2, 1.0, c2, "psi2");
  return law;
}

PaperLaw paper_preset() { return build_paper_law(0.5, 2.0, 0.2, 0.02, 0.32); }

GeneralLaw build_general_law(Real q1, Real q2_target) {
  if (!(q1 > 0)) throw InvalidParams("need q1 > 0");
  GeneralLaw law;
  law.q1 = q1;
  law.q2 = q2_target;
  law.a = q1;
  law.b = q2_target + 2 * q1;  // sup_{s>1} b(1 - 1/s^2) = b <= q2 + 2 q1
  if (!(law.b > 0)) throw InvalidParams("(H3) needs q2 + 2 q1 > 0 for a barrier");
  law.K = 2.5;

  // h(s/2)/h(s) -> 2 as s -> 0+ and -> +inf as s -> 1-; locate the K-crossing.
  const auto ratio = [&law](Real s) {
    return eval(law, s / 2).value / eval(law, s).value;
  };
  Real lo = 1e-12, hi = 1.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const Real mid = (lo + hi) / 2;
    (ratio(mid) < law.K ? lo : hi) = mid;
  }
  law.s0 = lo;
  return law;
}

ExtReal eval(const PaperLaw &law, Real s) {
  if (s <= 0) return ExtReal::infinity();
  if (s < law.c1) return ExtReal::finite(std::fabs(std::log(s)));
  if (s <= law.c2) return ExtReal::finite(law.theta(s));
  return ExtReal::finite(law.l * s + law.m);
}

Real eval_prime(const PaperLaw &law, Real s) {
  if (s <= 0) throw DomainError("h' undefined for s <= 0");
  if (s < law.c1) return -1.0 / s;
  if (s <= law.c2) return law.theta_prime(s);
  return law.l;
}

ExtReal eval(const GeneralLaw &law, Real s) {
  if (s <= 0) return ExtReal::infinity();
  const Real d = s - 1;
  return ExtReal::finite(law.a * d * d + law.b * (1.0 / s + s - 2.0));
}

Real eval_prime(const GeneralLaw &law, Real s) {
  if (s <= 0) throw DomainError("h' undefined for s <= 0");
  return 2 * law.a * (s - 1) + law.b * (1.0 - 1.0 / (s * s));
}

}  // namespace twistlab
