#include "nlchns/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace nlchns {

double nonlocal_energy(SpectralOps& ops, const KernelField& kernel, const ScalarField& phi) {
  const ScalarField Jphi = convolve(ops, kernel, phi);
  const ScalarField& a = kernel.a_field();
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += a[i] * phi[i] * phi[i] - phi[i] * Jphi[i];
  return 0.5 * s * phi.grid().cell_area();
}

EnergyLedgerEntry energy(const FlowState& state, const KernelField& kernel, const PotentialSpec& spec) {
  require_same_grid(state.grid(), kernel.grid(), "energy");
  SpectralOps ops(state.grid());
  EnergyLedgerEntry e;
  e.t = state.t;
  e.kinetic = 0.5 * inner(state.u, state.u);
  e.nonlocal = nonlocal_energy(ops, kernel, state.phi);
  double pot = 0.0;
  for (double v : state.phi.values()) pot += potential_F(spec, v);
  e.potential = pot * state.grid().cell_area();
  e.E = e.kinetic + e.nonlocal + e.potential;
  e.mass = integral(state.phi);
  return e;
}

ResidualSummary energy_identity_residual(const std::vector<EnergyLedgerEntry>& ledger, double dt) {
  ResidualSummary r;
  if (ledger.size() < 2) return r;
  r.residuals.reserve(ledger.size() - 1);
  for (std::size_t n = 0; n + 1 < ledger.size(); ++n) {
    const EnergyLedgerEntry& a = ledger[n];
    const double diss = dt * (a.visc_dissipation + a.mu_dissipation);
    const double force = dt * a.forcing_power;
    const double res = ledger[n + 1].E - a.E + diss - force;
    r.residuals.push_back(res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
    r.sum += res;
    r.sum_abs += std::abs(res);
    r.total_dissipation += diss;
    r.total_forcing += force;
  }
  return r;
}

double observed_order(double e1, double e2, double e3) {
  return std::min(std::log2(e1 / e2), std::log2(e2 / e3));
}

double DissipativeConstants::envelope(double E0, double t) const { return E0 * std::exp(-k * t) + asymptotic_bound(); }

double DissipativeConstants::entry_time(double E0) const {
  const double num = c13 * (E0 + gamma);
  const double den = R0 * R0 - (c13 * std::abs(L_m) + c14);
  if (!(num > 0.0)) return 0.0;
  return std::max(0.0, std::log(num / den) / k);
}

DissipativeConstants dissipative_constants(const PotentialSpec& spec, const KernelField& kernel, double nu1,
                                           double h_tb_norm, double mean, double R0_margin) {
  if (!(nu1 > 0.0)) throw ValidationError("dissipative_constants: nu1 must be positive");
  if (!(h_tb_norm >= 0.0)) throw ValidationError("dissipative_constants: forcing norm must be nonnegative");
  if (!(R0_margin > 0.0))
    throw ValidationError("dissipative_constants: R0^2 must exceed c13|L_m| + c14 (margin must be positive)");
  const AssumptionReport rep = verify_assumptions(spec, kernel);
  if (!rep.passed()) throw ValidationError("dissipative_constants: assumptions fail\n" + rep.to_key_value());

  const GridSpec& g = kernel.grid();
  DissipativeConstants c;
  c.mean = mean;
  c.F_mean = potential_F(spec, mean);
  c.area = g.area();
  c.c0 = rep.c0;
  c.q = rep.q;
  c.C9 = rep.C9;
  c.C10_unshifted = rep.C10;
  if (mean == 0.0) {
    c.C10 = rep.C10;
    c.F0 = potential_F(spec, 0.0);
  } else {
    const double R = potential_scan_radius(spec, 5.0) + std::abs(mean);
    const double Fm = c.F_mean;
    const double sup = scan_sup(
        [&](double s) { return c.C9 * std::pow(std::abs(s), 2.0 + 2.0 * c.q) - (potential_F(spec, s + mean) - Fm); },
        -R, R);
    c.C10 = std::max(0.0, sup + 1e-9 * (1.0 + std::abs(sup)));
    c.F0 = 0.0;
  }
  c.C_P = g.side_length / (2.0 * std::numbers::pi);
  c.lambda1 = g.fundamental() * g.fundamental();
  c.nu1 = nu1;
  c.kernel_l1 = kernel.l1_norm();
  c.kernel_grad_l1 = kernel.grad_l1_norm();
  c.C11 = 0.25 * (3.0 * c.kernel_l1 + c.C_P * c.C_P);
  // sup_{x ≥ 0} C11 x − (C9/2) x^{1+q}
  const double a = c.C11, b = 0.5 * c.C9;
  const double xs = std::pow(a / (b * (1.0 + c.q)), 1.0 / c.q);
  const double sup = a * xs * c.q / (1.0 + c.q);
  c.C12 = c.area * (sup + c.F0 + 0.5 * c.C10);
  c.C13 = std::max(1.0, 1.0 / (2.0 * c.lambda1 * nu1));
  c.k = 1.0 / (2.0 * c.C13);
  c.l = c.C12 / c.C13;
  c.h_tb_norm = h_tb_norm;
  c.K = h_tb_norm * h_tb_norm / (2.0 * nu1 * (1.0 - std::exp(-c.k))) + c.l / c.k;
  c.k3 = c.c0 * c.c0 / 4.0;
  c.k4 = 2.0 * c.kernel_grad_l1 * c.kernel_grad_l1;

  const double Finf = potential_inf(spec);
  c.gamma = std::max(0.0, -c.area * Finf);
  c.c9 = 1.0;
  const double R = potential_scan_radius(spec, 5.0);
  const double b9 = scan_sup([&](double s) { return c.c9 * s * s - potential_F(spec, s); }, -R, R);
  c.beta9 = std::max(0.0, b9 + 1e-9 * (1.0 + std::abs(b9)));
  c.L_m = c.F_mean * c.area + c.K;
  const double F0orig = potential_F(spec, 0.0);
  const double A = 3.0 + 1.0 / c.c9;
  c.c13 = 3.0 * A;
  c.c14 = 3.0 * (A * c.gamma + c.beta9 * c.area * (2.0 + 1.0 / c.c9) +
                 c.area * (std::abs(F0orig) + F0orig - Finf));
  c.R0_margin = R0_margin;
  c.R0 = std::sqrt((1.0 + R0_margin) * (c.c13 * std::abs(c.L_m) + c.c14));
  return c;
}

std::string DissipativeConstants::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "mean=" << mean << "\nF_mean=" << F_mean << "\narea=" << area << "\nc0=" << c0 << "\nC9=" << C9
     << "\nC10=" << C10 << "\nC10_unshifted=" << C10_unshifted << "\nF0=" << F0 << "\nq=" << q << "\nC_P=" << C_P << "\nlambda1=" << lambda1
     << "\nnu1=" << nu1 << "\nkernel_l1=" << kernel_l1 << "\nkernel_grad_l1=" << kernel_grad_l1 << "\nC11=" << C11
     << "\nC12=" << C12 << "\nC13=" << C13 << "\nk=" << k << "\nl=" << l << "\nh_tb_norm=" << h_tb_norm
     << "\nK=" << K << "\nk3=" << k3 << "\nk4=" << k4 << "\ngamma=" << gamma << "\nc9=" << c9 << "\nbeta9=" << beta9
     << "\nc13=" << c13 << "\nc14=" << c14 << "\nL_m=" << L_m << "\nR0=" << R0 << "\nR0_margin=" << R0_margin
     << "\nasymptotic_bound=" << asymptotic_bound() << "\n";
  return os.str();
}

double mu_gradient_slack(SpectralOps& ops, const KernelField& kernel, const PotentialSpec& spec, const DissipativeConstants& c,
                const ScalarField& phi) {
  const ScalarField Jphi = convolve(ops, kernel, phi);
  const ScalarField& a = kernel.a_field();
  ScalarField mu(phi.grid());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = a[i] * phi[i] - Jphi[i] + potential_dF(spec, phi[i]);
  const double gm = ops.gradient_norm_sq(mu);
  const double gp = ops.gradient_norm_sq(phi);
  const double p2 = inner(phi, phi);
  return gm + c.k4 * p2 - c.k3 * gp;
}

namespace {

void envelope_ledger(const std::vector<EnergyLedgerEntry>& ledger, const DissipativeConstants& c, EnvelopeReport& r) {
  r.samples = ledger.size();
  if (ledger.empty()) return;
  const double E0 = ledger.front().E;
  const double t0 = ledger.front().t;
  const double Fm = c.asymptotic_bound() - c.K;
  r.min_slack = INFINITY;
  r.min_relative_slack = INFINITY;
  r.min_shifted_slack = INFINITY;
  for (const auto& e : ledger) {
    const double t = e.t - t0;
    const double bound = c.envelope(E0, t);
    const double slack = bound - e.E;
    if (slack < r.min_slack) {
      r.min_slack = slack;
      r.min_slack_time = e.t;
    }
    r.min_relative_slack = std::min(r.min_relative_slack, slack / std::abs(bound));
    const double sharp = (E0 - Fm) * std::exp(-c.k * t) + Fm + c.K;
    r.min_shifted_slack = std::min(r.min_shifted_slack, sharp - e.E);
  }
  r.holds = r.min_slack > 0.0;
}

}  // namespace

EnvelopeReport envelope_check(const std::vector<EnergyLedgerEntry>& ledger, const DissipativeConstants& c) {
  EnvelopeReport r;
  envelope_ledger(ledger, c, r);
  return r;
}

EnvelopeReport envelope_check(const TrajectorySeries& series, const DissipativeConstants& c, const KernelField& kernel,
                              const PotentialSpec& spec) {
  EnvelopeReport r;
  envelope_ledger(series.ledger, c, r);
  SpectralOps ops(kernel.grid());
  r.mu_gradient_min_relative = INFINITY;
  for (const FlowState& s : series.states) {
    const double sl = mu_gradient_slack(ops, kernel, spec, c, s.phi);
    const double scale = ops.gradient_norm_sq(s.phi) * c.k3 + c.k4 * inner(s.phi, s.phi);
    const double rel = scale > 0.0 ? sl / scale : 0.0;
    r.mu_gradient_min_relative = std::min(r.mu_gradient_min_relative, rel);
    ++r.mu_gradient_samples;
  }
  r.mu_gradient_holds = r.mu_gradient_samples == 0 || r.mu_gradient_min_relative >= -1e-9;
  return r;
}

std::string EnvelopeReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "envelope_holds=" << (holds ? "true" : "false") << "\nmin_slack=" << min_slack
     << "\nmin_slack_time=" << min_slack_time << "\nmin_relative_slack=" << min_relative_slack
     << "\nmin_shifted_slack=" << min_shifted_slack << "\nsamples=" << samples
     << "\nmu_gradient_holds=" << (mu_gradient_holds ? "true" : "false") << "\nmu_gradient_min_relative=" << mu_gradient_min_relative
     << "\nmu_gradient_samples=" << mu_gradient_samples << "\n";
  return os.str();
}

}  // namespace nlchns
