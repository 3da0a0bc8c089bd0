#include "nlchns/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nlchns {

namespace {

// reads keys from one JSON object and rejects any it did not consume
class Block {
 public:
  Block(const Json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) fail("must be an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  double number(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_number()) fail(k + " must be a number");
    return v.get<double>();
  }
  double number(const std::string& k, double def) { return has(k) ? number(k) : def; }

  long long integer(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_number_integer()) fail(k + " must be an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& k, long long def) { return has(k) ? integer(k) : def; }

  std::string string(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_string()) fail(k + " must be a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& k, const std::string& def) { return has(k) ? string(k) : def; }

  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const Json& v = at(k);
    if (!v.is_boolean()) fail(k + " must be a boolean");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_array()) fail(k + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(k + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  const Json& object(const std::string& k) {
    const Json& v = at(k);
    if (!v.is_object()) fail(k + " must be an object");
    return v;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) fail("unknown key '" + k + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError("config." + name_ + ": " + msg); }

 private:
  const Json& at(const std::string& k) {
    if (!j_.contains(k)) fail("missing required key '" + k + "'");
    used_.insert(k);
    return j_.at(k);
  }

  const Json& j_;
  std::string name_;
  std::set<std::string> used_;
};

ForcingSpec parse_forcing(const Json& j) {
  Block b(j, "forcing");
  ForcingSpec f;
  f.kind = forcing_kind_from_string(b.string("kind"));
  if (f.kind != ForcingKind::Zero) {
    f.amplitude = b.number("amplitude");
    f.mx = int(b.integer("mx"));
    f.my = int(b.integer("my"));
    if (f.kind == ForcingKind::Periodic) f.period = b.number("period");
  }
  b.finish();
  f.validate();
  return f;
}

Json forcing_json(const ForcingSpec& f) {
  Json j;
  j["kind"] = to_string(f.kind);
  if (f.kind != ForcingKind::Zero) {
    j["amplitude"] = f.amplitude;
    j["mx"] = f.mx;
    j["my"] = f.my;
    if (f.kind == ForcingKind::Periodic) j["period"] = f.period;
  }
  return j;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  Block top(j, "root");
  RunConfig c;
  {
    Block b(top.object("grid"), "grid");
    const double L = b.number("L");
    const long long N = b.integer("N");
    const double f = b.number("dealias", 2.0 / 3.0);
    b.finish();
    if (N < 0 || N > (1 << 16)) b.fail("N out of range");
    c.grid = GridSpec::make(L, int(N), f);
  }
  {
    Block b(top.object("kernel"), "kernel");
    c.kernel.family = kernel_family_from_string(b.string("family"));
    c.kernel.width = b.number("width");
    c.kernel.mass = b.number("mass");
    b.finish();
    if (!(c.kernel.mass > 0.0)) b.fail("mass must be positive");
  }
  {
    Block b(top.object("potential"), "potential");
    c.potential.family = potential_family_from_string(b.string("family"));
    c.potential.coefficients = b.numbers("coefficients");
    b.finish();
    c.potential.validate();
  }
  if (top.has("stepper")) {
    Block b(top.object("stepper"), "stepper");
    StepperConfig s;
    s.dt = b.number("dt");
    s.viscosity.nu1 = b.number("nu1");
    s.viscosity.nu2 = b.number("nu2");
    s.s_stab = b.number("s_stab", s.s_stab);
    s.nu_bar = b.number("nu_bar", 0.0);
    s.cfl_limit = b.number("cfl_limit", s.cfl_limit);
    b.finish();
    c.stepper = s;
  }
  if (top.has("forcing")) {
    const ForcingSpec f = parse_forcing(top.object("forcing"));
    if (!c.stepper) top.fail("forcing requires a stepper block");
    c.stepper->forcing = f;
    c.has_forcing = true;
  }
  if (c.stepper) c.stepper->validate(c.potential);
  if (top.has("initial")) {
    Block b(top.object("initial"), "initial");
    InitialSpec s;
    s.kind = b.string("kind");
    if (s.kind == "random") {
      s.phi_mean = b.number("phi_mean");
      s.phi_amplitude = b.number("phi_amplitude");
      s.velocity_amplitude = b.number("velocity_amplitude");
      s.band = int(b.integer("band", s.band));
      if (s.band < 1 || 2 * s.band >= int(c.grid.resolution)) b.fail("band must lie in [1, N/2)");
    } else if (s.kind == "snapshot") {
      s.path = b.string("path");
    } else {
      b.fail("kind must be 'random' or 'snapshot'");
    }
    b.finish();
    c.initial = s;
  }
  if (top.has("experiment")) c.experiment = top.object("experiment");
  if (top.has("output")) {
    Block b(top.object("output"), "output");
    c.output.directory = b.string("directory");
    c.output.store_every = int(b.integer("store_every", 1));
    c.output.snapshots = b.boolean("snapshots", true);
    b.finish();
    if (c.output.store_every < 1) b.fail("store_every must be >= 1");
  }
  if (top.has("seed")) {
    const long long s = top.integer("seed");
    if (s < 0) top.fail("seed must be nonnegative");
    c.seed = std::uint64_t(s);
  }
  top.finish();
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

Json to_json(const RunConfig& c) {
  Json j;
  j["grid"] = {{"L", c.grid.side_length}, {"N", c.grid.resolution}, {"dealias", c.grid.dealias_fraction}};
  j["kernel"] = {{"family", to_string(c.kernel.family)}, {"width", c.kernel.width}, {"mass", c.kernel.mass}};
  j["potential"] = {{"family", to_string(c.potential.family)}, {"coefficients", c.potential.coefficients}};
  if (c.stepper) {
    const auto& s = *c.stepper;
    j["stepper"] = {{"dt", s.dt},         {"nu1", s.viscosity.nu1}, {"nu2", s.viscosity.nu2},
                    {"s_stab", s.s_stab}, {"nu_bar", s.nu_bar},     {"cfl_limit", s.cfl_limit}};
    if (c.has_forcing) j["forcing"] = forcing_json(s.forcing);
  }
  if (c.initial) {
    const auto& s = *c.initial;
    Json i{{"kind", s.kind}};
    if (s.kind == "random") {
      i["phi_mean"] = s.phi_mean;
      i["phi_amplitude"] = s.phi_amplitude;
      i["velocity_amplitude"] = s.velocity_amplitude;
      i["band"] = s.band;
    } else {
      i["path"] = s.path;
    }
    j["initial"] = i;
  }
  if (!c.experiment.empty()) j["experiment"] = c.experiment;
  j["output"] = {{"directory", c.output.directory},
                 {"store_every", c.output.store_every},
                 {"snapshots", c.output.snapshots}};
  j["seed"] = c.seed;
  return j;
}

const StepperConfig& require_stepper(const RunConfig& c) {
  if (!c.stepper) throw ValidationError("config: stepper block required");
  if (!c.has_forcing) throw ValidationError("config: forcing block required");
  return *c.stepper;
}

const InitialSpec& require_initial(const RunConfig& c) {
  if (!c.initial) throw ValidationError("config: initial block required");
  return *c.initial;
}

SimulateExperiment simulate_experiment(const RunConfig& c) {
  Block b(c.experiment, "experiment");
  SimulateExperiment e;
  e.T = b.number("T");
  b.finish();
  if (!(e.T >= 0.0)) b.fail("T must be nonnegative");
  return e;
}

ChExperiment ch_experiment(const RunConfig& c) {
  Block b(c.experiment, "experiment");
  ChExperiment e;
  e.T = b.number("T");
  e.mode = ch_mode_from_string(b.string("mode"));
  e.velocity = b.string("velocity");
  if (e.velocity == "cellular")
    e.velocity_amplitude = b.number("velocity_amplitude");
  else if (e.velocity != "zero")
    b.fail("velocity must be 'zero' or 'cellular'");
  b.finish();
  if (!(e.T >= 0.0)) b.fail("T must be nonnegative");
  return e;
}

AssumptionsExperiment assumptions_experiment(const RunConfig& c) {
  Block b(c.experiment, "experiment");
  AssumptionsExperiment e;
  e.M = b.number("M", e.M);
  e.samples = int(b.integer("samples", e.samples));
  b.finish();
  return e;
}

GronwallExperiment gronwall_experiment(const RunConfig& c) {
  Block b(c.experiment, "experiment");
  GronwallExperiment e;
  e.theta_csv = b.string("theta");
  e.f_csv = b.string("f");
  e.k = b.number("k");
  e.rel_tol = b.number("rel_tol", e.rel_tol);
  e.window = b.number("window", e.window);
  b.finish();
  if (!(e.k > 0.0)) b.fail("k must be positive");
  return e;
}

AttractorExperiment attractor_experiment(const RunConfig& c) {
  Block b(c.experiment, "experiment");
  AttractorExperiment e;
  e.T = b.number("T");
  e.mass_bound = b.number("mass_bound");
  e.energy_targets = b.numbers("energy_targets");
  e.sample_dt = b.number("sample_dt", e.sample_dt);
  e.cfl_target = b.number("cfl_target", e.cfl_target);
  e.R0_margin = b.number("R0_margin", e.R0_margin);
  e.threads = int(b.integer("threads", e.threads));
  e.velocity_band = int(b.integer("velocity_band", e.velocity_band));
  e.phase_band = int(b.integer("phase_band", e.phase_band));
  b.finish();
  if (e.energy_targets.empty()) b.fail("energy_targets must be nonempty");
  return e;
}

ContractionExperiment contraction_experiment(const RunConfig& c) {
  Block b(c.experiment, "experiment");
  ContractionExperiment e;
  e.T = b.number("T");
  e.delta_norm = b.number("delta_norm");
  e.velocity_amplitude = b.number("velocity_amplitude");
  e.phi_amplitude = b.number("phi_amplitude");
  b.finish();
  if (!(e.T >= 0.0) || !(e.delta_norm >= 0.0)) b.fail("T and delta_norm must be nonnegative");
  return e;
}

}  // namespace nlchns
