#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlchns/kernel.hpp"
#include "nlchns/potential.hpp"

namespace nlchns {

struct FlowState {
  VectorField u;
  ScalarField phi;
  double t = 0.0;

  explicit FlowState(const GridSpec& grid) : u(grid), phi(grid) {}
  FlowState(VectorField u_, ScalarField phi_, double t_ = 0.0);
  const GridSpec& grid() const { return phi.grid(); }
  bool operator==(const FlowState& o) const { return u == o.u && phi == o.phi && t == o.t; }
};

struct EnergyLedgerEntry {
  double t = 0, E = 0, kinetic = 0, nonlocal = 0, potential = 0;
  double visc_dissipation = 0, mu_dissipation = 0, forcing_power = 0, mass = 0;
};

struct ViscosityLaw {
  double nu1 = 1.0;
  double nu2 = 1.0;
  double operator()(double phi) const {
    const double v = nu1 + (nu2 - nu1) * (1.0 + phi) / 2.0;
    return std::min(std::max(v, std::min(nu1, nu2)), std::max(nu1, nu2));
  }
};

enum class ForcingKind { Zero, Steady, Periodic };

std::string to_string(ForcingKind k);
ForcingKind forcing_kind_from_string(const std::string& s);

// h = A (−k_y, k_x)/|k| sin(k·x) times 1 (steady) or sin(2πt/period) (periodic)
struct ForcingSpec {
  ForcingKind kind = ForcingKind::Zero;
  double amplitude = 0.0;
  int mx = 1, my = 0;
  double period = 1.0;

  void validate() const;
  bool is_zero() const { return kind == ForcingKind::Zero || amplitude == 0.0; }
  double time_factor(double t) const;
  VectorField evaluate(const GridSpec& grid, double t) const;
  // ‖h(t)‖ in V′_div (multiplier 1/|k|) at unit time factor
  double profile_dual_norm(const GridSpec& grid) const;
  // ‖h‖ in L²_tb(0,∞; V′_div)
  double tb_norm(const GridSpec& grid) const;
};

struct StepperConfig {
  double dt = 1e-3;
  double s_stab = 8.0;
  double nu_bar = 0.0;  // 0 selects (ν₁+ν₂)/2
  double cfl_limit = 0.5;
  ViscosityLaw viscosity;
  ForcingSpec forcing;

  double mean_viscosity() const { return nu_bar > 0.0 ? nu_bar : 0.5 * (viscosity.nu1 + viscosity.nu2); }
  void validate(const PotentialSpec& spec) const;
};

class CflViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, FlowState last_valid)
      : std::runtime_error(what), last_valid_(std::move(last_valid)) {}
  const FlowState& last_valid() const { return last_valid_; }

 private:
  FlowState last_valid_;
};

ScalarField chemical_potential(const KernelField& kernel, const PotentialSpec& spec, const ScalarField& phi);
VectorField korteweg_force(const ScalarField& phi, const ScalarField& mu);
double trilinear_b(const VectorField& u, const VectorField& v, const VectorField& w);

// Spectral φ-advance of the IMEX scheme with transport velocity u (may be null).
// Also returns μⁿ in band-limited form through mu_hat if given.
void advance_phase(SpectralOps& ops, const KernelField& kernel, const PotentialSpec& spec, double dt, double s_stab,
                   const ScalarField& phi, const VectorField* u, ScalarField& phi_next, Spectrum* mu_hat = nullptr,
                   Spectrum* phi_hat = nullptr);

class Stepper {
 public:
  Stepper(const KernelField& kernel, const PotentialSpec& spec, const StepperConfig& cfg);

  const StepperConfig& config() const { return cfg_; }
  const KernelField& kernel() const { return kernel_; }
  const PotentialSpec& potential() const { return spec_; }
  const GridSpec& grid() const { return kernel_.grid(); }

  void check_cfl(const FlowState& s) const;
  FlowState step(const FlowState& s);
  // advances and reports the ledger entry of the incoming state
  FlowState step(const FlowState& s, EnergyLedgerEntry& entry_of_s);
  EnergyLedgerEntry ledger_entry(const FlowState& s);
  ScalarField chemical_potential(const ScalarField& phi);

 private:
  FlowState step_impl(const FlowState& s, EnergyLedgerEntry* entry, bool check);

  KernelField kernel_;
  PotentialSpec spec_;
  StepperConfig cfg_;
  SpectralOps ops_;
};

struct TrajectorySeries {
  double step_dt = 0.0;
  int store_every = 1;
  std::vector<FlowState> states;
  std::vector<EnergyLedgerEntry> ledger;  // one entry per step plus the final state

  double sample_dt() const { return step_dt * store_every; }
};

using StepObserver = std::function<void(const FlowState& prev, const FlowState& next, const EnergyLedgerEntry& prev_entry)>;

struct SimulateOptions {
  int store_every = 1;
  std::vector<StepObserver> observers;
};

class SimulationAborted : public std::runtime_error {
 public:
  SimulationAborted(const std::string& what, TrajectorySeries partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const TrajectorySeries& partial() const { return partial_; }

 private:
  TrajectorySeries partial_;
};

long long step_count(double t0, double T_final, double dt);

TrajectorySeries simulate(const FlowState& state0, Stepper& stepper, double T_final, const SimulateOptions& opts = {});

}  // namespace nlchns
