#pragma once

#include <string>
#include <vector>

#include "nlchns/energetics.hpp"
#include "nlchns/gronwall.hpp"

namespace nlchns {

struct NormSample {
  double u_l2 = 0, phi_l4 = 0, grad_u = 0, grad_phi = 0, phi_t_dual = 0, u_t_dual = 0;
};

// uniformly spaced norm samples of a trajectory; derivatives are backward differences
struct NormTrace {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<NormSample> samples;

  double time(std::size_t i) const { return t0 + double(i) * dt; }
  std::size_t size() const { return samples.size(); }
};

NormSample norm_sample(SpectralOps& ops, const FlowState& s, const FlowState& prev, double dt);
NormTrace norm_trace(const TrajectorySeries& series);

// per-step accumulation, recording every `stride` steps
class NormTraceBuilder {
 public:
  NormTraceBuilder(const GridSpec& grid, double step_dt, int stride = 1);
  void add(const FlowState& prev, const FlowState& next);
  StepObserver observer();
  const NormTrace& trace() const { return trace_; }

 private:
  SpectralOps ops_;
  double step_dt_;
  int stride_;
  long long steps_ = 0;
  NormTrace trace_;
};

struct TrajectoryNormParts {
  double sup_term = 0, grad_u_tb = 0, grad_phi_tb = 0, phi_t_tb = 0, u_t_tb = 0;
  double total() const { return sup_term + grad_u_tb + grad_phi_tb + phi_t_tb + u_t_tb; }
};

TrajectoryNormParts trajectory_norm_parts(const NormTrace& trace, double window = 1.0, double u_t_exponent = 2.0);
double trajectory_norm(const NormTrace& trace, double window = 1.0, double u_t_exponent = 2.0);
double trajectory_norm(const TrajectorySeries& series, double window = 1.0, double u_t_exponent = 2.0);

TrajectorySeries translate(const TrajectorySeries& series, double tau);
NormTrace translate(const NormTrace& trace, double tau);

// ‖f‖⁴_{L⁴} ≤ C ‖f‖²‖∇f‖² for mean-zero scalars on the square torus
double ladyzhenskaya_constant();

struct MonitorSample {
  double t, measured, bound;
};

struct MonitorReport {
  double E_hat = 0.0;  // sup of E over [0, 1]
  double min_slack = 0.0;
  double min_relative_slack = 0.0;
  bool holds = false;
  std::vector<MonitorSample> samples;
  std::string to_key_value() const;
};

// bound on ‖T(t)z‖ from the dissipative chain, as a function of an energy level B ≥ E(τ), τ ≥ t
TrajectoryNormParts trajectory_bound(double B, const DissipativeConstants& c, double nu2);

MonitorReport trajectory_monitor(const NormTrace& trace, const std::vector<EnergyLedgerEntry>& ledger,
                              const DissipativeConstants& c, double nu2, double window = 1.0);

}  // namespace nlchns
