#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nlchns/gronwall.hpp"

using namespace nlchns;

TEST_SUITE("gronwall") {
  TEST_CASE("cumulative trapezoid is exact on affine signals") {
    const SampledSignal g = SampledSignal::sample(1.0, 0.1, 21, [](double t) { return 3.0 * t - 1.0; });
    const auto I = cumulative_trapezoid(g);
    CHECK(I.front() == 0.0);
    // ∫₁³ (3t − 1) dt = 10
    CHECK(I.back() == doctest::Approx(10.0).epsilon(1e-13));
  }

  TEST_CASE("translation-bounded norms") {
    const SampledSignal c3 = SampledSignal::sample(0.0, 0.01, 501, [](double) { return 3.0; });
    CHECK(tb_norm(c3, 1.0) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(tb_norm(c3, 2.0) == doctest::Approx(3.0).epsilon(1e-13));
    const SampledSignal e = SampledSignal::sample(0.0, 1e-4, 50001, [](double t) { return std::exp(-t); });
    CHECK(std::abs(tb_norm(e, 1.0) - (1.0 - std::exp(-1.0))) < 1e-6);
    // window of two units on a decaying signal: ∫₀² e^{−t}
    CHECK(std::abs(tb_norm(e, 1.0, 2.0) - (1.0 - std::exp(-2.0))) < 1e-6);
    const SampledSignal short_sig = SampledSignal::sample(0.0, 0.1, 5, [](double) { return 1.0; });
    CHECK_THROWS_AS(tb_norm(short_sig, 1.0), std::invalid_argument);
  }

  TEST_CASE("bound forms") {
    const SampledSignal zero = SampledSignal::sample(0.0, 0.01, 301, [](double) { return 0.0; });
    const SampledSignal b = gronwall_bound(2.0, 1.0, 0.0, zero);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.values[i] == doctest::Approx(2.0 * std::exp(-b.time(i))).epsilon(1e-14));

    // constant f: θ₀e^{−kt} + (f/k)(1 − e^{−kt})
    const double k = 0.7, f0 = 1.3;
    const SampledSignal f = SampledSignal::sample(0.0, 0.001, 5001, [&](double) { return f0; });
    const SampledSignal conv = gronwall_bound_convolution(0.5, k, f);
    for (std::size_t i = 0; i < conv.size(); i += 250) {
      const double t = conv.time(i);
      CHECK(conv.values[i] == doctest::Approx(0.5 * std::exp(-k * t) + f0 / k * (1 - std::exp(-k * t))).epsilon(1e-7));
    }

    const SampledSignal g = SampledSignal::sample(0.0, 0.001, 8001, [](double t) { return 1.0 + std::sin(3 * t) * std::sin(3 * t) * 4.0; });
    const SampledSignal a = gronwall_bound_convolution(1.0, k, g);
    const SampledSignal tr = gronwall_bound(1.0, k, 0.0, g);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values[i] <= tr.values[i] + 1e-12);
  }

  TEST_CASE("saturating signals pass the integral inequality") {
    const double k = 0.5;
    const SampledSignal f = SampledSignal::sample(0.0, 1e-3, 4001, [](double t) { return 1.0 + 0.5 * std::cos(t); });
    // θ′ = −kθ + f solved exactly
    auto exact = [&](double t) {
      const double part = (k * std::cos(t) + std::sin(t)) / (k * k + 1.0);
      const double c = 2.0 - 1.0 / k - 0.5 * k / (k * k + 1.0);
      return c * std::exp(-k * t) + 1.0 / k + 0.5 * part;
    };
    const SampledSignal theta = SampledSignal::sample(0.0, 1e-3, 4001, exact);
    CHECK(theta.values[0] == doctest::Approx(2.0));
    const IntegralInequalityReport r = verify_integral_inequality(theta, f, k, 1e-6);
    CHECK(r.holds);
    CHECK(r.conclusion_checked);
    CHECK(r.conclusion_holds);
    CHECK(std::abs(r.worst_excess) < 1e-6);

    const SampledSignal decay = SampledSignal::sample(0.0, 1e-3, 2001, [&](double t) { return 3.0 * std::exp(-k * t); });
    const SampledSignal none = SampledSignal::sample(0.0, 1e-3, 2001, [](double) { return 0.0; });
    CHECK(verify_integral_inequality(decay, none, k, 1e-6).holds);
  }

  TEST_CASE("an upward jump is flagged") {
    const double k = 0.5;
    SampledSignal theta = SampledSignal::sample(0.0, 0.01, 401, [&](double t) { return std::exp(-k * t); });
    for (std::size_t i = 200; i < theta.size(); ++i) theta.values[i] += 1.0;
    const SampledSignal f = SampledSignal::sample(0.0, 0.01, 401, [](double) { return 0.0; });
    const IntegralInequalityReport r = verify_integral_inequality(theta, f, k);
    CHECK_FALSE(r.holds);
    CHECK(r.worst_excess > 0.5);
    CHECK(r.worst_t >= 200);
    CHECK(r.worst_s < 200);
  }

  TEST_CASE("mismatched signals are rejected") {
    const SampledSignal a = SampledSignal::sample(0.0, 0.01, 11, [](double) { return 1.0; });
    const SampledSignal b = SampledSignal::sample(0.0, 0.02, 11, [](double) { return 1.0; });
    CHECK_THROWS_AS(verify_integral_inequality(a, b, 1.0), std::invalid_argument);
  }
}
