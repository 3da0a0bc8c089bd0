#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nlchns {

struct SampledSignal {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return t0 + double(i) * dt; }
  double span() const { return values.empty() ? 0.0 : dt * double(values.size() - 1); }
  void validate() const;

  template <class F>
  static SampledSignal sample(double t0, double dt, std::size_t n, F&& f) {
    SampledSignal s{t0, dt, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) s.values[i] = f(s.time(i));
    return s;
  }
};

// prefix trapezoid integrals, out[i] = ∫_{t0}^{t_i}
std::vector<double> cumulative_trapezoid(const SampledSignal& g);

double tb_norm(const SampledSignal& g, double p, double window = 1.0);

// θ₀e^{−kt} + l/k + ‖g‖_{L¹_tb}/(1 − e^{−k}) on g's time grid
SampledSignal gronwall_bound(double theta0, double k, double l, const SampledSignal& g);
// θ₀e^{−kt} + ∫₀ᵗ e^{−k(t−τ)} f(τ) dτ
SampledSignal gronwall_bound_convolution(double theta0, double k, const SampledSignal& f);

struct IntegralInequalityReport {
  bool holds = false;
  double worst_excess = 0.0;  // max over pairs of lhs − rhs
  std::size_t worst_s = 0, worst_t = 0;
  double tolerance = 0.0;
  bool conclusion_checked = false;
  bool conclusion_holds = false;
  double conclusion_min_slack = 0.0;

  std::string to_key_value() const;
};

// checks θ(t) + k∫₀ᵗθ ≤ ∫ₛᵗf + θ(s) + k∫₀ˢθ for every grid pair s ≤ t
IntegralInequalityReport verify_integral_inequality(const SampledSignal& theta, const SampledSignal& f, double k,
                                                    double rel_tol = 1e-9);

}  // namespace nlchns
