#include "doctest.h"
#include "helpers.hpp"
#include "nlchns/potential.hpp"

using namespace nlchns;

TEST_SUITE("potential") {
  TEST_CASE("quartic values") {
    const PotentialSpec q = PotentialSpec::quartic();
    auto check = [&](double s, double F, double dF, double d2F) {
      const PotentialValue v = eval_potential(q, s);
      CHECK(v.F == doctest::Approx(F));
      CHECK(v.dF == doctest::Approx(dF));
      CHECK(v.d2F == doctest::Approx(d2F));
    };
    check(1.0, 0.0, 0.0, 8.0);
    check(0.0, 1.0, 0.0, -4.0);
    check(2.0, 9.0, 24.0, 44.0);
  }

  TEST_CASE("polynomial family agrees with the quartic") {
    const PotentialSpec q = PotentialSpec::quartic(1.5, 0.8);
    const double b2 = 0.64;
    const PotentialSpec p = PotentialSpec::polynomial({1.5 * b2 * b2, 0.0, -3.0 * b2, 0.0, 1.5});
    for (double s = -3.0; s <= 3.0; s += 0.173) {
      const PotentialValue a = eval_potential(q, s), b = eval_potential(p, s);
      CHECK(a.F == doctest::Approx(b.F).epsilon(1e-12));
      CHECK(a.dF == doctest::Approx(b.dF).epsilon(1e-12));
      CHECK(a.d2F == doctest::Approx(b.d2F).epsilon(1e-12));
    }
  }

  TEST_CASE("derivatives against central differences") {
    const PotentialSpec p = PotentialSpec::polynomial({0.3, -0.2, -1.0, 0.1, 0.5, 0.0, 0.25});
    const double h = 1e-5;
    for (double s = -2.0; s <= 2.0; s += 0.37) {
      const double fd1 = (potential_F(p, s + h) - potential_F(p, s - h)) / (2 * h);
      const double fd2 = (potential_dF(p, s + h) - potential_dF(p, s - h)) / (2 * h);
      CHECK(eval_potential(p, s).dF == doctest::Approx(fd1).epsilon(1e-7));
      CHECK(eval_potential(p, s).d2F == doctest::Approx(fd2).epsilon(1e-7));
    }
  }

  TEST_CASE("invalid families are rejected") {
    CHECK_THROWS_AS(PotentialSpec::polynomial({1.0, 0.0, 1.0}).validate(), ValidationError);
    CHECK_THROWS_AS(PotentialSpec::polynomial({1.0, 0.0, 1.0, 0.0, 0.0, 1.0}).validate(), ValidationError);
    CHECK_THROWS_AS(PotentialSpec::polynomial({1.0, 0.0, 1.0, 0.0, -1.0}).validate(), ValidationError);
    CHECK_THROWS_AS(PotentialSpec::quartic(-1.0, 1.0).validate(), ValidationError);
  }

  TEST_CASE("assumption constants for the quartic with a mass-5 kernel") {
    const GridSpec g = testing::grid(64);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 0.5, 5.0});
    const AssumptionReport r = verify_assumptions(PotentialSpec::quartic(), k);
    CHECK(r.passed());
    CHECK(r.c0 == 1.0);
    CHECK(r.q == 1.0);
    CHECK(r.c7 == 12.0);
    CHECK(r.C9 == 0.5);
    CHECK(r.C10 == 1.0);
    // F(s) − ½s⁴ = ½s⁴ − 2s² + 1 has minimum −1 at s² = 2
    double worst = 1e300;
    for (double s = -5.0; s <= 5.0; s += 1e-4) worst = std::min(worst, potential_F(PotentialSpec::quartic(), s) - 0.5 * s * s * s * s);
    CHECK(worst == doctest::Approx(-1.0).epsilon(1e-8));
  }

  TEST_CASE("a weak kernel breaks the convexity assumption") {
    const GridSpec g = testing::grid(64);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 0.5, 1.0});
    const AssumptionReport r = verify_assumptions(PotentialSpec::quartic(), k);
    CHECK_FALSE(r.convexity);
    CHECK_FALSE(r.passed());
    CHECK(r.c0 == doctest::Approx(-3.0));
  }

  TEST_CASE("numeric constants for a general polynomial satisfy their inequalities") {
    const GridSpec g = testing::grid(32);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 0.5, 6.0});
    const PotentialSpec p = PotentialSpec::polynomial({0.5, 0.1, -2.0, 0.0, 0.3, 0.0, 0.2});
    const AssumptionReport r = verify_assumptions(p, k, 4.0, 4000);
    CHECK(r.passed());
    CHECK(r.q == 2.0);
    // independent check of F'' + a ≥ c₀ on a finer grid
    for (double s = -4.0; s <= 4.0; s += 1e-3) CHECK(eval_potential(p, s).d2F + k.a_min() >= r.c0 - 1e-9);
  }

  TEST_CASE("convex split") {
    const GridSpec g = testing::grid(16);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 1.0, 5.0});
    const PotentialSpec q = PotentialSpec::quartic();
    const double c0 = 1.0;
    CHECK(convex_split(q, k, c0, 0.0, 3, 4).G == doctest::Approx(1.0));
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
      const double s = U(rng);
      const ConvexSplit cs = convex_split(q, k, c0, s, 1, 2);
      CHECK(std::abs(cs.G - (k.a_field().at(1, 2) - c0 / 2) * s * s / 2 - potential_F(q, s)) < 1e-12 * std::max(1.0, cs.G));
    }
    const double h = 1e-3;
    for (double s = -3.0; s <= 3.0; s += h) {
      const double d2 = (convex_split(q, k, c0, s + h, 0, 0).G_tilde - 2 * convex_split(q, k, c0, s, 0, 0).G_tilde +
                         convex_split(q, k, c0, s - h, 0, 0).G_tilde) / (h * h);
      CHECK(d2 >= c0 - 1e-6);
    }
  }
}
