#include "doctest.h"
#include "helpers.hpp"
#include "nlchns/kernel.hpp"
#include "nlchns/spectral.hpp"

using namespace nlchns;
using testing::max_diff;

namespace {

// (J∗φ)(x_i) = Σ_j J(x_i − x_j) φ(x_j) h², periodic indices
ScalarField direct_convolution(const ScalarField& J, const ScalarField& phi) {
  const GridSpec& g = phi.grid();
  const int N = g.resolution;
  ScalarField out(g);
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      double s = 0.0;
      for (int jy = 0; jy < N; ++jy)
        for (int jx = 0; jx < N; ++jx) s += J.at((ix - jx + N) % N, (iy - jy + N) % N) * phi.at(jx, jy);
      out.at(ix, iy) = s * g.cell_area();
    }
  return out;
}

ScalarField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField f(g);
  for (double& v : f.values()) v = U(rng);
  return f;
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("normalization and a-field") {
    const GridSpec g = testing::grid(64);
    for (auto fam : {KernelFamily::PeriodizedGaussian, KernelFamily::MollifiedNewtonian}) {
      const KernelField k = KernelField::build(g, {fam, 0.5, 5.0});
      CHECK(std::abs(k.l1_norm() - 5.0) < 1e-10);
      CHECK(std::abs(k.a_min() - 5.0) < 1e-10);
      CHECK(std::abs(k.a_max() - 5.0) < 1e-10);
      CHECK(std::abs(integral(k.samples()) - 5.0) < 1e-10);
    }
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 0.5, 5.0});
    double direct = 0.0;
    for (double v : k.samples().values()) direct += v;
    direct *= g.cell_area();
    CHECK(std::abs(k.spectrum()[0].real() - direct) < 1e-12);
    CHECK(std::abs(k.spectrum()[0].real() - 5.0) < 1e-12);
  }

  TEST_CASE("width limits") {
    const GridSpec g = testing::grid(16);
    CHECK_THROWS_AS(KernelField::build(g, {KernelFamily::PeriodizedGaussian, 0.3, 5.0}), ValidationError);
    CHECK_THROWS_AS(KernelField::build(g, {KernelFamily::PeriodizedGaussian, 2.0, 5.0}), ValidationError);
    CHECK_THROWS_AS(KernelField::build(g, {KernelFamily::PeriodizedGaussian, 1.0, -1.0}), ValidationError);
    CHECK_NOTHROW(KernelField::build(g, {KernelFamily::PeriodizedGaussian, 1.0, 5.0}));
  }

  TEST_CASE("uneven samples are rejected") {
    const GridSpec g = testing::grid(8);
    ScalarField s(g);
    s.at(1, 0) = 1.0;
    CHECK_THROWS_AS(KernelField::from_samples(s), ValidationError);
  }

  TEST_CASE("linearity and J∗1 = a") {
    const GridSpec g = testing::grid(16);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 1.0, 5.0});
    CHECK(max_abs(convolve(k, ScalarField(g))) == 0.0);
    CHECK(max_diff(convolve(k, ScalarField(g, 1.0)), k.a_field()) < 1e-13);
  }

  TEST_CASE("spectral convolution matches the direct quadrature oracle") {
    for (int N : {8, 12, 16}) {
      const GridSpec g = testing::grid(N);
      const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, g.side_length / 4.0, 5.0});
      for (unsigned seed = 1; seed <= 3; ++seed) {
        const ScalarField phi = random_field(g, seed * 17 + N);
        CHECK(max_diff(convolve(k, phi), direct_convolution(k.samples(), phi)) < 1e-12);
      }
      // a generic even kernel built from random symmetric samples
      ScalarField s(g);
      std::mt19937 rng(N);
      std::uniform_real_distribution<double> U(0.0, 1.0);
      for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) {
          const int jx = (N - ix) % N, jy = (N - iy) % N;
          if (jy * N + jx < iy * N + ix) s.at(ix, iy) = s.at(jx, jy);
          else s.at(ix, iy) = U(rng);
        }
      const KernelField kr = KernelField::from_samples(s);
      const ScalarField phi = random_field(g, 99);
      CHECK(max_diff(convolve(kr, phi), direct_convolution(s, phi)) < 1e-12);
    }
  }

  TEST_CASE("convolution is symmetric") {
    const GridSpec g = testing::grid(32);
    const KernelField k = KernelField::build(g, {KernelFamily::MollifiedNewtonian, 0.5, 5.0});
    const ScalarField a = random_field(g, 1), b = random_field(g, 2);
    const double lhs = inner(convolve(k, a), b), rhs = inner(a, convolve(k, b));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
  }

  TEST_CASE("convolution commutes with grid translation") {
    const GridSpec g = testing::grid(16);
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, 1.0, 5.0});
    const ScalarField a = random_field(g, 5);
    ScalarField sh(g);
    for (int iy = 0; iy < 16; ++iy)
      for (int ix = 0; ix < 16; ++ix) sh.at((ix + 3) % 16, (iy + 5) % 16) = a.at(ix, iy);
    const ScalarField ca = convolve(k, a), csh = convolve(k, sh);
    double m = 0.0;
    for (int iy = 0; iy < 16; ++iy)
      for (int ix = 0; ix < 16; ++ix) m = std::max(m, std::abs(csh.at((ix + 3) % 16, (iy + 5) % 16) - ca.at(ix, iy)));
    CHECK(m < 1e-13);
  }

  TEST_CASE("gradient L1 norm of the Gaussian") {
    // ∫|∇J| for a radial Gaussian of mass M and width ε is M·√(π/2)/ε
    const GridSpec g = testing::grid(128);
    const double eps = 0.5;
    const KernelField k = KernelField::build(g, {KernelFamily::PeriodizedGaussian, eps, 5.0});
    CHECK(k.grad_l1_norm() == doctest::Approx(5.0 * std::sqrt(std::numbers::pi / 2.0) / eps).epsilon(1e-3));
  }
}
