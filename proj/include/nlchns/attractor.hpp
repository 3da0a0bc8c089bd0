#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlchns/energetics.hpp"

namespace nlchns {

// d = ‖u₁−u₂‖ + ‖φ₁−φ₂‖ + |∫F(φ₁) − ∫F(φ₂)|^{1/2}
double metric_d(const FlowState& a, const FlowState& b, const PotentialSpec& spec);

struct EnsembleSet {
  double mass_bound = 0.0;
  std::vector<FlowState> members;
  std::vector<std::uint64_t> seeds;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

// sup over a ∈ A of inf over b ∈ B of d(a, b)
double hausdorff_semidist(const std::vector<FlowState>& A, const std::vector<FlowState>& B, const PotentialSpec& spec);
double hausdorff_semidist(const EnsembleSet& A, const EnsembleSet& B, const PotentialSpec& spec);

// mean m̄ minimizing F over |s| ≤ m/|Ω|
double preferred_mean(const PotentialSpec& spec, const GridSpec& grid, double m);

// φ = mean + A·shape with max|shape| = 1, band-limited; max|u| = velocity_amplitude, divergence-free
FlowState random_state(const GridSpec& grid, double phi_mean, double phi_amplitude, double velocity_amplitude,
                       int band, std::uint64_t seed);

struct InitialDataOptions {
  int velocity_band = 4;  // |k| ≤ band
  int phase_band = 4;
  int amplitude_samples = 64;
};

EnsembleSet sample_initial_data(const GridSpec& grid, const KernelField& kernel, const PotentialSpec& spec, double m,
                                const std::vector<double>& energy_targets, std::uint64_t seed,
                                const InitialDataOptions& opts = {});

struct AbsorptionConfig {
  StepperConfig stepper;  // dt is the largest step allowed
  double T = 50.0;
  double sample_dt = 0.05;
  double cfl_target = 0.35;
  int threads = 0;  // 0 selects the hardware concurrency
};

struct AbsorptionMember {
  std::size_t id = 0;
  double E0 = 0.0;
  double d0 = 0.0;
  double entry_time = -1.0;  // −1 when the ball was never reached
  double t0_bound = 0.0;
  bool entered = false;
  bool stayed_inside = false;
  bool blew_up = false;
  double max_d_after_entry = 0.0;
  long long steps = 0;
  std::string error;
};

struct AbsorptionReport {
  double R0 = 0.0;
  double T = 0.0;
  std::vector<AbsorptionMember> members;

  bool all_within_bound() const;
  bool all_stayed() const;
  bool passed() const { return all_within_bound() && all_stayed(); }
  std::string to_csv() const;
  std::string to_key_value() const;
};

AbsorptionReport absorption_experiment(const EnsembleSet& ensemble, const KernelField& kernel,
                                       const PotentialSpec& spec, const AbsorptionConfig& cfg,
                                       const DissipativeConstants& constants);

// snapshots at t ≥ burn_in every `spacing`, deduplicated within d ≤ dedup_tol
EnsembleSet omega_limit_sample(const TrajectorySeries& long_run, const PotentialSpec& spec, double burn_in,
                               double spacing, double dedup_tol = 1e-10);

struct DecayPoint {
  double t, dist;
};

// dist(T(t)B, S) along trajectories started from each member of B
std::vector<DecayPoint> semidistance_decay(const std::vector<TrajectorySeries>& runs, const EnsembleSet& sample,
                                           const PotentialSpec& spec);

}  // namespace nlchns
