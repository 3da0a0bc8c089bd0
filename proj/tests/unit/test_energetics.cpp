#include "doctest.h"
#include "helpers.hpp"
#include "nlchns/energetics.hpp"

using namespace nlchns;

namespace {

KernelField default_kernel(const GridSpec& g) {
  return KernelField::build(g, {KernelFamily::PeriodizedGaussian, std::max(0.5, 2.0 * g.side_length / g.resolution), 5.0});
}

// ¼ ΣΣ J(x−y)(φ(x) − φ(y))² h⁴
double double_sum_nonlocal(const KernelField& k, const ScalarField& phi) {
  const GridSpec& g = phi.grid();
  const int N = g.resolution;
  double s = 0.0;
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix)
      for (int jy = 0; jy < N; ++jy)
        for (int jx = 0; jx < N; ++jx) {
          const double d = phi.at(ix, iy) - phi.at(jx, jy);
          s += k.samples().at((ix - jx + N) % N, (iy - jy + N) % N) * d * d;
        }
  return 0.25 * s * g.cell_area() * g.cell_area();
}

}  // namespace

TEST_SUITE("energetics") {
  TEST_CASE("energy of uniform states") {
    const GridSpec g = testing::grid(32);
    const KernelField k = default_kernel(g);
    const PotentialSpec q = PotentialSpec::quartic();
    FlowState s(g);
    CHECK(energy(s, k, q).E == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-13));
    s.phi = ScalarField(g, 1.0);
    CHECK(std::abs(energy(s, k, q).E) < 1e-12);
    s.u = testing::solenoidal_field(g, 1, 3);
    CHECK(energy(s, k, q).kinetic == doctest::Approx(0.5 * inner(s.u, s.u)));
  }

  TEST_CASE("nonlocal energy matches the double-sum oracle") {
    const GridSpec g = testing::grid(8);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, g.side_length / 4.0, 5.0});
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField phi(g);
    for (double& v : phi.values()) v = U(rng);
    SpectralOps ops(g);
    CHECK(std::abs(nonlocal_energy(ops, k, phi) - double_sum_nonlocal(k, phi)) < 1e-12);
  }

  TEST_CASE("residuals of a stationary state vanish") {
    const GridSpec g = testing::grid(16);
    const KernelField k = default_kernel(g);
    StepperConfig c;
    c.dt = 1e-2;
    c.viscosity = {1.0, 1.0};
    Stepper st(k, PotentialSpec::quartic(), c);
    FlowState s(g);
    s.phi = ScalarField(g, -0.2);
    const TrajectorySeries ser = simulate(s, st, 0.2);
    const ResidualSummary r = energy_identity_residual(ser.ledger, c.dt);
    CHECK(r.max_abs < 1e-12);
  }

  TEST_CASE("residuals telescope") {
    const GridSpec g = testing::grid(16);
    const KernelField k = default_kernel(g);
    StepperConfig c;
    c.dt = 1e-2;
    c.viscosity = {1.0, 2.0};
    Stepper st(k, PotentialSpec::quartic(), c);
    FlowState s(g);
    s.phi = testing::trig_field(g, 2, 3);
    s.phi *= 0.8 / max_abs(s.phi);
    s.u = testing::solenoidal_field(g, 3, 2);
    s.u *= 0.5 / max_abs(s.u);
    const TrajectorySeries ser = simulate(s, st, 0.3);
    const ResidualSummary r = energy_identity_residual(ser.ledger, c.dt);
    const double expect = ser.ledger.back().E - ser.ledger.front().E + r.total_dissipation - r.total_forcing;
    CHECK(r.sum == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("observed order") {
    CHECK(observed_order(4.0, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(observed_order(16.0, 4.0, 2.0) == doctest::Approx(1.0));
  }

  TEST_CASE("dissipative constants on the default configuration") {
    const GridSpec g = testing::grid(64);
    const KernelField k = default_kernel(g);
    const PotentialSpec q = PotentialSpec::quartic();
    const DissipativeConstants c = dissipative_constants(q, k, 1.0, 0.0);
    CHECK(c.lambda1 == doctest::Approx(1.0));
    CHECK(c.C13 == doctest::Approx(1.0));
    CHECK(c.k == doctest::Approx(0.5));
    CHECK(c.C11 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c.K == doctest::Approx(c.l / c.k).epsilon(1e-14));
    CHECK(c.F_mean == doctest::Approx(1.0));

    const DissipativeConstants c1 = dissipative_constants(q, k, 1.0, 1.5);
    const DissipativeConstants c2 = dissipative_constants(q, k, 1.0, 3.0);
    CHECK(c2.K - c2.l / c2.k == doctest::Approx(4.0 * (c1.K - c1.l / c1.k)).epsilon(1e-12));

    // entry time grows by log 2 / k when E0 doubles (γ = 0 for the quartic)
    CHECK(c.gamma == 0.0);
    CHECK(c.entry_time(2e5) - c.entry_time(1e5) == doctest::Approx(std::log(2.0) / c.k).epsilon(1e-12));
    CHECK(c.entry_time(0.0) == 0.0);

    const DissipativeConstants cv = dissipative_constants(q, k, 0.25, 0.0);
    CHECK(cv.k == doctest::Approx(0.25));
    CHECK_THROWS_AS(dissipative_constants(q, KernelField::build(g, {KernelFamily::PeriodizedGaussian, 0.5, 1.0}), 1.0, 0.0),
                    ValidationError);
  }

  TEST_CASE("chemical potential gradient lower bound on random fields") {
    const GridSpec g = testing::grid(32);
    const KernelField k = default_kernel(g);
    const PotentialSpec q = PotentialSpec::quartic();
    const DissipativeConstants c = dissipative_constants(q, k, 1.0, 0.0);
    SpectralOps ops(g);
    for (std::uint64_t s = 0; s < 10; ++s) {
      ScalarField phi = testing::trig_field(g, 40 + s, 2 + int(s % 5));
      phi *= (0.2 + 0.3 * double(s)) / max_abs(phi);
      const double sl = mu_gradient_slack(ops, k, q, c, phi);
      const double scale = c.k3 * ops.gradient_norm_sq(phi) + c.k4 * inner(phi, phi);
      CHECK(sl >= -1e-9 * scale);
    }
  }

  TEST_CASE("envelope holds for a pure state at rest") {
    const GridSpec g = testing::grid(16);
    const KernelField k = default_kernel(g);
    const PotentialSpec q = PotentialSpec::quartic();
    const DissipativeConstants c = dissipative_constants(q, k, 1.0, 0.0);
    StepperConfig sc;
    sc.dt = 1e-2;
    sc.viscosity = {1.0, 1.0};
    Stepper st(k, q, sc);
    FlowState s(g);
    const TrajectorySeries ser = simulate(s, st, 1.0);
    const EnvelopeReport r = envelope_check(ser.ledger, c);
    CHECK(r.holds);
    CHECK(r.min_slack > 0.0);
  }
}
