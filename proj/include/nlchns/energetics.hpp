#pragma once

#include <string>
#include <vector>

#include "nlchns/chns.hpp"

namespace nlchns {

// E parts and mass of a state; dissipation and forcing columns are left at zero
EnergyLedgerEntry energy(const FlowState& state, const KernelField& kernel, const PotentialSpec& spec);
double nonlocal_energy(SpectralOps& ops, const KernelField& kernel, const ScalarField& phi);

struct ResidualSummary {
  std::vector<double> residuals;
  double max_abs = 0.0;
  double sum = 0.0;
  double sum_abs = 0.0;
  double total_dissipation = 0.0;
  double total_forcing = 0.0;
};

// rⁿ = Eⁿ⁺¹ − Eⁿ + dt(2‖√ν Du‖² + ‖∇μ‖²)ⁿ − dt⟨h,u⟩ⁿ
ResidualSummary energy_identity_residual(const std::vector<EnergyLedgerEntry>& ledger, double dt);

// min of log2(e1/e2), log2(e2/e3) for errors at dt, dt/2, dt/4
double observed_order(double e1, double e2, double e3);

struct DissipativeConstants {
  double mean = 0.0;       // m̄ = (φ,1)/|Ω|
  double F_mean = 0.0;     // F(m̄)
  double area = 0.0;
  double c0 = 0.0, C9 = 0.0, C10 = 0.0, F0 = 0.0, q = 1.0;
  double C10_unshifted = 0.0;
  double C_P = 0.0, lambda1 = 0.0, nu1 = 0.0;
  double kernel_l1 = 0.0, kernel_grad_l1 = 0.0;
  double C11 = 0.0, C12 = 0.0, C13 = 0.0, k = 0.0, l = 0.0;
  double h_tb_norm = 0.0, K = 0.0;
  double k3 = 0.0, k4 = 0.0;
  // point-dissipativity chain
  double gamma = 0.0, c9 = 0.0, beta9 = 0.0, c13 = 0.0, c14 = 0.0, L_m = 0.0, R0 = 0.0, R0_margin = 1.0;

  double asymptotic_bound() const { return F_mean * area + K; }
  double envelope(double E0, double t) const;
  double entry_time(double E0) const;
  std::string to_key_value() const;
};

DissipativeConstants dissipative_constants(const PotentialSpec& spec, const KernelField& kernel, double nu1,
                                           double h_tb_norm, double mean = 0.0, double R0_margin = 1.0);

// ‖∇μ‖² + k₄‖φ‖² − k₃‖∇φ‖² for one field, μ evaluated pointwise
double mu_gradient_slack(SpectralOps& ops, const KernelField& kernel, const PotentialSpec& spec, const DissipativeConstants& c,
                const ScalarField& phi);

struct EnvelopeReport {
  bool holds = false;
  double min_slack = 0.0;
  double min_slack_time = 0.0;
  double min_relative_slack = 0.0;
  double min_shifted_slack = 0.0;
  std::size_t samples = 0;
  bool mu_gradient_holds = true;
  double mu_gradient_min_relative = 0.0;
  std::size_t mu_gradient_samples = 0;

  std::string to_key_value() const;
};

EnvelopeReport envelope_check(const std::vector<EnergyLedgerEntry>& ledger, const DissipativeConstants& c);
EnvelopeReport envelope_check(const TrajectorySeries& series, const DissipativeConstants& c, const KernelField& kernel,
                              const PotentialSpec& spec);

}  // namespace nlchns
