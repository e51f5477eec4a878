#pragma once

/*! @file energy_law.hpp
    @brief The singular stored-energy law

        h(s) = +inf          s <= 0
               |ln s|        0 < s < c1
               theta(s)      c1 <= s <= c2
               l s + m       s > c2

    with the connector theta built from positive affine densities psi_1 on
    [c1,1] and psi_2 on [1,c2] satisfying the four moment conditions

        int psi_1 = 1/c1,  int s psi_1 = 1 - theta1 - ln c1,
        int psi_2 = l,     int s psi_2 = theta1 - m,

    which make h C^1 and convex with unique minimum theta1 at s = 1; plus the
    canonical general family h(s) = a(s-1)^2 + b(1/s + s - 2) satisfying
    (H0)-(H4).

    Feasibility notes for the affine connector: positivity of the solved
    psi_i forces theta1 into the window (1 - ln c1 - 1/c1, |ln c1|) from the
    psi_1 mean-value constraint and (m + l, m + l c2) from psi_2; tuples
    outside the intersection raise InfeasibleLaw. */

#include <variant>

#include "twistlab/types.hpp"

namespace twistlab {

template <class S>
struct PaperLawT {
  S c1, c2, l, m, theta1;
  Vec2T<S> psi1;  // psi1(s) = psi1[0] + psi1[1] s on [c1, 1]
  Vec2T<S> psi2;  // on [1, c2]

  // theta(s) = |ln c1| + (proof-form double integral reduced to a cubic):
  //   s in [c1,1]: 1 - ln c1 - s/c1 + int_c1^s (s-t) psi1(t) dt
  //   s in [1,c2]: theta1 + int_1^s (s-t) psi2(t) dt
  S theta(S s) const {
    if (s <= S(1)) return S(1) - std::log(c1) - s / c1 + kernel(psi1, c1, s);
    return theta1 + kernel(psi2, S(1), s);
  }
  S theta_prime(S s) const {
    if (s <= S(1)) return -S(1) / c1 + anti0(psi1, s) - anti0(psi1, c1);
    return anti0(psi2, s) - anti0(psi2, S(1));
  }

 private:
  // antiderivatives of psi and t psi for affine psi
  static S anti0(const Vec2T<S> &p, S t) { return p[0] * t + p[1] * t * t / S(2); }
  static S anti1(const Vec2T<S> &p, S t) {
    return p[0] * t * t / S(2) + p[1] * t * t * t / S(3);
  }
  // int_base^s (s - t) psi(t) dt, exact
  static S kernel(const Vec2T<S> &p, S base, S s) {
    return s * (anti0(p, s) - anti0(p, base)) - (anti1(p, s) - anti1(p, base));
  }
};

using PaperLaw = PaperLawT<Real>;

template <class S>
struct GeneralLawT {
  S q1, q2;  // (H3): h'(s) <= 2 q1 s + q2 for s > 1
  S a, b;    // h(s) = a(s-1)^2 + b(1/s + s - 2)
  S K, s0;   // (H4): h(s/2) <= K h(s) on (0, s0)
};

using GeneralLaw = GeneralLawT<Real>;

/// Solves the affine moment systems and validates positivity and joints.
/// Throws InvalidParams / InfeasibleLaw.
PaperLaw build_paper_law(Real c1, Real c2, Real l, Real m, Real theta1);

/// Canonical (H0)-(H4) family with a = q1, b = q2_target + 2 q1 (the (H3)
/// bound is then tight as s -> inf); K = 2.5 with s0 located numerically.
GeneralLaw build_general_law(Real q1, Real q2_target);

/// Shipped feasible preset (c1=0.5, c2=2, l=0.2, m=0.02, theta1=0.32).
PaperLaw paper_preset();

ExtReal eval(const PaperLaw &law, Real s);
ExtReal eval(const GeneralLaw &law, Real s);
Real eval_prime(const PaperLaw &law, Real s);   // throws DomainError at s <= 0
Real eval_prime(const GeneralLaw &law, Real s);

//// Runtime wrapper used by the assembly loops.
class EnergyLaw {
 public:
  EnergyLaw() : law_(paper_preset()) {}
  explicit EnergyLaw(PaperLaw l) : law_(std::move(l)) {}
  explicit EnergyLaw(GeneralLaw l) : law_(std::move(l)) {}

  ExtReal operator()(Real s) const {
    return std::visit([s](const auto &l) { return eval(l, s); }, law_);
  }
  Real prime(Real s) const {
    return std::visit([s](const auto &l) { return eval_prime(l, s); }, law_);
  }

  bool is_paper() const { return std::holds_alternative<PaperLaw>(law_); }
  const PaperLaw &paper() const { return std::get<PaperLaw>(law_); }
  const GeneralLaw &general() const { return std::get<GeneralLaw>(law_); }

 private:
  std::variant<PaperLaw, GeneralLaw> law_;
};

}  // namespace twistlab
