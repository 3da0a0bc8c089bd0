#include "nlchns/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "nlchns/grid.hpp"

namespace nlchns {

void SampledSignal::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("signal: dt must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("signal: non-finite value");
}

std::vector<double> cumulative_trapezoid(const SampledSignal& g) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) out[i] = out[i - 1] + 0.5 * g.dt * (g.values[i - 1] + g.values[i]);
  return out;
}

double tb_norm(const SampledSignal& g, double p, double window) {
  g.validate();
  if (!(p >= 1.0)) throw ValidationError("tb_norm: exponent must be >= 1");
  if (!(window > 0.0)) throw ValidationError("tb_norm: window must be positive");
  const auto w = std::size_t(std::llround(window / g.dt));
  if (w == 0 || g.size() < w + 1) throw ValidationError("tb_norm: signal shorter than the window");
  SampledSignal a = g;
  for (double& v : a.values) v = std::pow(std::abs(v), p);
  const std::vector<double> I = cumulative_trapezoid(a);
  double best = 0.0;
  for (std::size_t i = 0; i + w < I.size(); ++i) best = std::max(best, I[i + w] - I[i]);
  return std::pow(best, 1.0 / p);
}

SampledSignal gronwall_bound(double theta0, double k, double l, const SampledSignal& g) {
  if (!(k > 0.0)) throw ValidationError("gronwall_bound: k must be positive");
  const double gtb = tb_norm(g, 1.0, 1.0);
  const double tail = l / k + gtb / (1.0 - std::exp(-k));
  SampledSignal out{g.t0, g.dt, std::vector<double>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = theta0 * std::exp(-k * (g.time(i) - g.t0)) + tail;
  return out;
}

SampledSignal gronwall_bound_convolution(double theta0, double k, const SampledSignal& f) {
  if (!(k > 0.0)) throw ValidationError("gronwall_bound: k must be positive");
  f.validate();
  SampledSignal out{f.t0, f.dt, std::vector<double>(f.size())};
  const double decay = std::exp(-k * f.dt);
  double I = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i > 0) I = decay * I + 0.5 * f.dt * (decay * f.values[i - 1] + f.values[i]);
    out.values[i] = theta0 * std::exp(-k * (f.time(i) - f.t0)) + I;
  }
  return out;
}

IntegralInequalityReport verify_integral_inequality(const SampledSignal& theta, const SampledSignal& f, double k,
                                                    double rel_tol) {
  theta.validate();
  f.validate();
  if (theta.size() != f.size() || theta.dt != f.dt || theta.t0 != f.t0)
    throw ValidationError("verify_integral_inequality: signals must share a time grid");
  IntegralInequalityReport r;
  const std::size_t n = theta.size();
  if (n == 0) return r;
  const std::vector<double> It = cumulative_trapezoid(theta);
  const std::vector<double> If = cumulative_trapezoid(f);
  double scale = 0.0;
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = theta.values[i] + k * It[i] - If[i];
    scale = std::max({scale, std::abs(theta.values[i]), std::abs(k * It[i]), std::abs(If[i])});
  }
  r.tolerance = rel_tol * std::max(scale, 1e-300);
  // ρ(t) ≤ ρ(s) for s < t, via the running minimum of ρ
  double worst = -INFINITY;
  std::size_t ws = 0, wt = 0;
  double runmin = INFINITY;
  std::size_t runarg = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0 && rho[t - 1] < runmin) {
      runmin = rho[t - 1];
      runarg = t - 1;
    }
    if (t == 0) continue;
    const double e = rho[t] - runmin;
    if (e > worst) {
      worst = e;
      ws = runarg;
      wt = t;
    }
  }
  if (n > 1) {
    r.worst_excess = worst;
    r.worst_s = ws;
    r.worst_t = wt;
  } else {
    r.worst_excess = 0.0;
  }
  r.holds = r.worst_excess <= r.tolerance;
  if (r.holds) {
    const SampledSignal b = gronwall_bound_convolution(theta.values[0], k, f);
    r.conclusion_checked = true;
    r.conclusion_min_slack = INFINITY;
    for (std::size_t i = 0; i < n; ++i) r.conclusion_min_slack = std::min(r.conclusion_min_slack, b.values[i] - theta.values[i]);
    r.conclusion_holds = r.conclusion_min_slack >= -r.tolerance;
  }
  return r;
}

std::string IntegralInequalityReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "holds=" << (holds ? "true" : "false") << "\nworst_excess=" << worst_excess << "\nworst_s=" << worst_s
     << "\nworst_t=" << worst_t << "\ntolerance=" << tolerance
     << "\nconclusion_checked=" << (conclusion_checked ? "true" : "false")
     << "\nconclusion_holds=" << (conclusion_holds ? "true" : "false")
     << "\nconclusion_min_slack=" << conclusion_min_slack << "\n";
  return os.str();
}

}  // namespace nlchns
