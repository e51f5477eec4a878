#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twistlab/energy_law.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/rng.hpp"

using namespace twistlab;

TEST_CASE("paper law: shipped preset moment solve is frozen") {
  const PaperLaw pl = paper_preset();
  CHECK(pl.c1 == 0.5);
  CHECK(pl.c2 == 2.0);
  CHECK(pl.l == 0.2);
  CHECK(pl.m == 0.02);
  CHECK(pl.theta1 == 0.32);
  // psi1 from the 2x2 moment system, frozen against law_reference.py
  CHECK(pl.psi1[0] == doctest::Approx(13.133402999683936).epsilon(1e-14));
  CHECK(pl.psi1[1] == doctest::Approx(-12.177870666245248).epsilon(1e-14));
  // psi2 degenerates to the constant 0.2 for this preset
  CHECK(pl.psi2[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(pl.psi2[1] == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  // positivity of the densities on their intervals
  CHECK(pl.psi1[0] + pl.psi1[1] * pl.c1 > 0);
  CHECK(pl.psi1[0] + pl.psi1[1] * 1.0 > 0);
}

TEST_CASE("paper law: frozen point values") {
  const EnergyLaw law{paper_preset()};
  // theta branch, below 1 (values frozen against law_reference.py)
  CHECK(law(0.6).as_double() == doctest::Approx(0.5263398737817111).epsilon(1e-13));
  CHECK(law.prime(0.6) == doctest::Approx(-1.3564425866750955).epsilon(1e-13));
  CHECK(law(0.75).as_double() == doctest::Approx(0.38157359027997306).epsilon(1e-13));
  CHECK(law.prime(0.75) == doctest::Approx(-0.61944154167983623).epsilon(1e-13));
  CHECK(law(0.9).as_double() == doctest::Approx(0.32680730677823466).epsilon(1e-13));
  // theta above 1 is exactly theta1 + 0.1 (s-1)^2 for this preset
  for (const Real s : {1.1, 1.3, 1.5, 1.7, 1.9, 2.0}) {
    CHECK(law(s).as_double() ==
          doctest::Approx(0.32 + 0.1 * (s - 1) * (s - 1)).epsilon(1e-13));
    CHECK(law.prime(s) == doctest::Approx(0.2 * (s - 1)).epsilon(1e-12));
  }
  // log branch and linear tail are literal
  CHECK(law(0.25).as_double() == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(law.prime(0.25) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(law(5.0).as_double() == doctest::Approx(1.02).epsilon(1e-15));
  CHECK(law.prime(5.0) == 0.2);
}

TEST_CASE("paper law: joints are C1 and the minimum sits at 1") {
  const PaperLaw pl = paper_preset();
  const EnergyLaw law{pl};
  CHECK(pl.theta(pl.c1) == doctest::Approx(std::fabs(std::log(pl.c1))).epsilon(1e-14));
  CHECK(pl.theta(pl.c2) == doctest::Approx(pl.l * pl.c2 + pl.m).epsilon(1e-14));
  // these two are exact from the branch formulas
  CHECK(pl.theta_prime(pl.c1) == -1.0 / pl.c1);
  CHECK(law.prime(1.0) == 0.0);
  CHECK(pl.theta_prime(pl.c2) == doctest::Approx(pl.l).epsilon(1e-14));
  CHECK(pl.theta(1.0) == doctest::Approx(pl.theta1).epsilon(1e-13));
  // h(1) = theta1 is the minimum value
  CHECK(law(1.0).as_double() == doctest::Approx(0.32).epsilon(1e-13));
  for (const Real s : {0.1, 0.5, 0.8, 1.2, 3.0})
    CHECK(law(s).as_double() > law(1.0).as_double());
}

TEST_CASE("paper law: infinite barrier for s <= 0") {
  const EnergyLaw law{paper_preset()};
  CHECK(!law(0.0).is_finite());
  CHECK(!law(-1.0).is_finite());
  CHECK(law(1e-12).as_double() == doctest::Approx(-std::log(1e-12)).epsilon(1e-14));
  CHECK_THROWS_AS(law.prime(0.0), DomainError);
  CHECK_THROWS_AS(law.prime(-2.0), DomainError);
}

TEST_CASE("paper law: chord convexity on a seeded corpus") {
  const EnergyLaw law{paper_preset()};
  Rng rng(7);
  for (int i = 0; i < 4000; ++i) {
    const Real a = std::exp(rng.uniform(std::log(1e-2), std::log(20.0)));
    const Real b = std::exp(rng.uniform(std::log(1e-2), std::log(20.0)));
    const Real ha = law(a).as_double(), hb = law(b).as_double();
    const Real hm = law(0.5 * (a + b)).as_double();
    CHECK(hm <= 0.5 * (ha + hb) + 1e-12 * std::max({1.0, std::fabs(ha), std::fabs(hb)}));
  }
}

TEST_CASE("paper law: infeasible tuples raise InfeasibleLaw") {
  // theta1 = 2.2 exceeds the psi1 window (1 - ln c1 - 1/c1, |ln c1|)
  CHECK_THROWS_AS(build_paper_law(0.5, 2.0, 1.0, 0.1, 2.2), InfeasibleLaw);
  // theta1 above the psi2 window (m + l, m + l c2): mean of psi2 leaves [1, c2]
  CHECK_THROWS_AS(build_paper_law(0.5, 2.0, 0.2, 0.02, 0.5), InfeasibleLaw);
  // ordering violations are parameter errors, not moment infeasibility
  CHECK_THROWS_AS(build_paper_law(0.5, 2.0, 0.2, 0.02, 0.1), InvalidParams);
  CHECK_THROWS_AS(build_paper_law(-0.5, 2.0, 0.2, 0.02, 0.32), InvalidParams);
  CHECK_THROWS_AS(build_paper_law(0.5, 0.4, 0.2, 0.02, 0.32), InvalidParams);
}

TEST_CASE("general law: normalization and curvature") {
  const GeneralLaw gl = build_general_law(1.0, 0.5);
  CHECK(gl.a == 1.0);
  CHECK(gl.b == doctest::Approx(2.5).epsilon(1e-14));  // q2 + 2 q1
  const EnergyLaw law{gl};
  CHECK(law(1.0).as_double() == 0.0);
  CHECK(law.prime(1.0) == 0.0);
  CHECK(!law(0.0).is_finite());
  for (const Real s : {0.2, 0.7, 1.0, 1.8, 4.0}) {
    const Real d = 1e-5;
    const Real fd2 =
        (law(s + d).as_double() - 2 * law(s).as_double() + law(s - d).as_double()) /
        (d * d);
    CHECK(fd2 == doctest::Approx(2 * gl.a + 2 * gl.b / (s * s * s)).epsilon(1e-4));
  }
}

TEST_CASE("general law: (H3) and (H4) hold as advertised") {
  const GeneralLaw gl = build_general_law(1.0, 0.5);
  const EnergyLaw law{gl};
  // (H3): h'(s) <= 2 q1 s + q2 for s > 1
  for (Real s = 1.01; s < 50.0; s *= 1.17)
    CHECK(law.prime(s) <= 2 * gl.q1 * s + gl.q2 + 1e-12);
  // (H4): h(s/2) <= K h(s) on (0, s0)
  CHECK(gl.K == 2.5);
  CHECK(gl.s0 > 0);
  for (Real s = 1e-4; s < gl.s0; s *= 1.13)
    CHECK(law(s / 2).as_double() <= gl.K * law(s).as_double() + 1e-12);
}
