#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlchns/ch_convective.hpp"

namespace nlchns {

using Json = nlohmann::ordered_json;

struct InitialSpec {
  std::string kind;  // "random" or "snapshot"
  double phi_mean = 0.0;
  double phi_amplitude = 0.0;
  double velocity_amplitude = 0.0;
  int band = 4;
  std::string path;
};

struct OutputSpec {
  std::string directory = ".";
  int store_every = 1;
  bool snapshots = true;
};

struct RunConfig {
  GridSpec grid;
  KernelParams kernel;
  PotentialSpec potential;
  std::optional<StepperConfig> stepper;  // forcing lives inside once parsed
  bool has_forcing = false;
  std::optional<InitialSpec> initial;
  Json experiment = Json::object();
  OutputSpec output;
  std::uint64_t seed = 0;
};

RunConfig parse_config(const Json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
Json to_json(const RunConfig& c);

// per-subcommand experiment blocks

struct SimulateExperiment {
  double T = 0.0;
};

struct ChExperiment {
  double T = 0.0;
  ChMode mode = ChMode::TorusSpectral;
  std::string velocity = "zero";  // "zero" or "cellular" (ψ = A sin kx sin ky)
  double velocity_amplitude = 0.0;
};

struct AssumptionsExperiment {
  double M = 5.0;
  int samples = 10000;
};

struct GronwallExperiment {
  std::string theta_csv, f_csv;
  double k = 0.0;
  double rel_tol = 1e-9;
  double window = 1.0;
};

struct AttractorExperiment {
  double T = 0.0;
  double mass_bound = 0.0;
  std::vector<double> energy_targets;
  double sample_dt = 0.05;
  double cfl_target = 0.35;
  double R0_margin = 1.0;
  int threads = 0;
  int velocity_band = 4;
  int phase_band = 4;
};

struct ContractionExperiment {
  double T = 0.0;
  double delta_norm = 0.0;
  double velocity_amplitude = 0.0;
  double phi_amplitude = 0.0;
};

SimulateExperiment simulate_experiment(const RunConfig& c);
ChExperiment ch_experiment(const RunConfig& c);
AssumptionsExperiment assumptions_experiment(const RunConfig& c);
GronwallExperiment gronwall_experiment(const RunConfig& c);
AttractorExperiment attractor_experiment(const RunConfig& c);
ContractionExperiment contraction_experiment(const RunConfig& c);

const StepperConfig& require_stepper(const RunConfig& c);
const InitialSpec& require_initial(const RunConfig& c);

}  // namespace nlchns
