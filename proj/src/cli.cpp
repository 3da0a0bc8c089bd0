#include "nlchns/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nlchns/attractor.hpp"
#include "nlchns/io.hpp"
#include "nlchns/trajectory.hpp"

namespace nlchns {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"simulate",        "ch-only",         "check-assumptions",
                                          "gronwall-verify", "probe-attractor", "contraction-test"};
  return s;
}

namespace {

class Aborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string path_in(const RunConfig& c, const std::string& name) { return (fs::path(c.output.directory) / name).string(); }

void prepare_output(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output.directory, ec);
  if (ec) throw IoError("cannot create output directory " + c.output.directory + ": " + ec.message());
}

FlowState initial_state(const RunConfig& c) {
  const InitialSpec& s = require_initial(c);
  if (s.kind == "snapshot") {
    FlowState z = read_snapshot(s.path);
    if (!(z.grid().side_length == c.grid.side_length && z.grid().resolution == c.grid.resolution))
      throw ValidationError("initial snapshot grid does not match the grid block");
    FlowState out(c.grid);
    std::copy(z.u.x.values().begin(), z.u.x.values().end(), out.u.x.values().begin());
    std::copy(z.u.y.values().begin(), z.u.y.values().end(), out.u.y.values().begin());
    std::copy(z.phi.values().begin(), z.phi.values().end(), out.phi.values().begin());
    out.t = z.t;
    return out;
  }
  return random_state(c.grid, s.phi_mean, s.phi_amplitude, s.velocity_amplitude, s.band, c.seed);
}

std::string kv_line(const std::string& k, double v) {
  std::ostringstream os;
  os << std::setprecision(17) << k << '=' << v << '\n';
  return os.str();
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const StepperConfig& sc = require_stepper(c);
  const SimulateExperiment e = simulate_experiment(c);
  const KernelField kernel = KernelField::build(c.grid, c.kernel);
  const FlowState z0 = initial_state(c);
  Stepper stepper(kernel, c.potential, sc);
  stepper.check_cfl(z0);
  prepare_output(c);

  SimulateOptions opts;
  opts.store_every = c.output.store_every;
  TrajectorySeries series;
  std::string abort_msg;
  try {
    series = simulate(z0, stepper, z0.t + e.T, opts);
  } catch (const SimulationAborted& ex) {
    series = ex.partial();
    abort_msg = ex.what();
  }
  write_ledger_csv(path_in(c, "ledger.csv"), series.ledger);
  if (c.output.snapshots) {
    write_snapshot(path_in(c, "initial.nlchns"), series.states.front());
    write_snapshot(path_in(c, "final.nlchns"), series.states.back());
  }
  std::ostringstream rep;
  const auto& L = series.ledger;
  const double m0 = L.front().mass, m1 = L.back().mass;
  const ResidualSummary r = energy_identity_residual(L, series.step_dt);
  rep << kv_line("steps", double(L.size() - 1)) << kv_line("t_final", L.back().t) << kv_line("E_initial", L.front().E)
      << kv_line("E_final", L.back().E) << kv_line("mass_initial", m0) << kv_line("mass_final", m1)
      << kv_line("energy_residual_max_abs", r.max_abs) << kv_line("energy_residual_sum_abs", r.sum_abs);
  rep << "status=" << (abort_msg.empty() ? "ok" : "aborted") << '\n';
  write_text(path_in(c, "summary.txt"), rep.str());
  out << rep.str();
  if (!abort_msg.empty()) throw Aborted(abort_msg);
  return kExitOk;
}

GivenVelocity ch_velocity(const GridSpec& g, ChMode mode, const std::string& kind, double A) {
  if (kind == "zero") return GivenVelocity::zero(g, mode);
  const double k = g.fundamental();
  return GivenVelocity::from_stream_function(g, mode,
                                             [=](double x, double y) { return A * std::sin(k * x) * std::sin(k * y) / k; });
}

int cmd_ch_only(const RunConfig& c, std::ostream& out) {
  if (!c.stepper) throw ValidationError("config: stepper block required");
  const ChExperiment e = ch_experiment(c);
  const InitialSpec& is = require_initial(c);
  const KernelField kernel = KernelField::build(c.grid, c.kernel);
  const GivenVelocity vel = ch_velocity(c.grid, e.mode, e.velocity, e.velocity_amplitude);
  ChConfig cc;
  cc.dt = c.stepper->dt;
  cc.s_stab = c.stepper->s_stab;
  cc.cfl_limit = c.stepper->cfl_limit;
  ScalarField phi0 = is.kind == "snapshot" ? initial_state(c).phi
                                           : random_state(c.grid, is.phi_mean, is.phi_amplitude, 0.0, is.band, c.seed).phi;
  ChSolver solver(kernel, c.potential, vel, cc);
  prepare_output(c);
  const long long n = step_count(0.0, e.T, cc.dt);
  std::vector<ScalarField> states{phi0};
  std::string abort_msg;
  try {
    for (long long k = 0; k < n; ++k) {
      ScalarField next = solver.step(states.back());
      if (!all_finite(next)) throw NumericalAbort("non-finite phase field", FlowState(c.grid));
      states.push_back(std::move(next));
    }
  } catch (const NumericalAbort& ex) {
    abort_msg = ex.what();
  }
  {
    std::ostringstream csv;
    csv << "# nlchns " << kVersion << "\nt,energy,grad_mu_sq,advective_power,mass\n" << std::setprecision(17);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const ChTerms t = solver.terms(states[i]);
      csv << double(i) * cc.dt << ',' << t.energy << ',' << t.grad_mu_sq << ',' << t.advective_power << ',' << t.mass
          << '\n';
    }
    write_text(path_in(c, "ch_ledger.csv"), csv.str());
  }
  const ResidualSummary r = ch_energy_residual(states, solver);
  std::ostringstream rep;
  rep << "mode=" << to_string(e.mode) << '\n'
      << kv_line("steps", double(states.size() - 1)) << kv_line("velocity_sup", vel.sup_norm)
      << kv_line("velocity_max_divergence", vel.max_divergence()) << kv_line("energy_residual_max_abs", r.max_abs)
      << kv_line("energy_residual_sum_abs", r.sum_abs)
      << kv_line("mass_drift", std::abs(integral(states.back()) - integral(states.front())));
  rep << "status=" << (abort_msg.empty() ? "ok" : "aborted") << '\n';
  write_text(path_in(c, "ch_summary.txt"), rep.str());
  out << rep.str();
  if (!abort_msg.empty()) throw Aborted(abort_msg);
  return kExitOk;
}

int cmd_check_assumptions(const RunConfig& c, std::ostream& out) {
  const AssumptionsExperiment e = assumptions_experiment(c);
  const KernelField kernel = KernelField::build(c.grid, c.kernel);
  const AssumptionReport rep = verify_assumptions(c.potential, kernel, e.M, e.samples);
  const std::string text = rep.to_key_value();
  prepare_output(c);
  write_text(path_in(c, "assumptions.txt"), text);
  out << text;
  if (!rep.passed()) throw ValidationError("assumptions violated; see assumptions.txt");
  return kExitOk;
}

int cmd_gronwall(const RunConfig& c, std::ostream& out) {
  const GronwallExperiment e = gronwall_experiment(c);
  const SampledSignal theta = read_signal_csv(e.theta_csv);
  const SampledSignal f = read_signal_csv(e.f_csv);
  const IntegralInequalityReport rep = verify_integral_inequality(theta, f, e.k, e.rel_tol);
  prepare_output(c);
  const SampledSignal conv = gronwall_bound_convolution(theta.values.front(), e.k, f);
  const SampledSignal tb_bound = gronwall_bound(theta.values.front(), e.k, 0.0, f);
  write_signal_csv(path_in(c, "bound_convolution.csv"), conv, "bound");
  write_signal_csv(path_in(c, "bound_tb.csv"), tb_bound, "bound");
  std::ostringstream os;
  os << rep.to_key_value() << kv_line("f_tb_l1", tb_norm(f, 1.0, e.window));
  write_text(path_in(c, "gronwall.txt"), os.str());
  out << os.str();
  return kExitOk;
}

int cmd_probe(const RunConfig& c, std::ostream& out) {
  const StepperConfig& sc = require_stepper(c);
  const AttractorExperiment e = attractor_experiment(c);
  const KernelField kernel = KernelField::build(c.grid, c.kernel);
  InitialDataOptions io;
  io.velocity_band = e.velocity_band;
  io.phase_band = e.phase_band;
  const EnsembleSet ens = sample_initial_data(c.grid, kernel, c.potential, e.mass_bound, e.energy_targets, c.seed, io);
  const double mean = preferred_mean(c.potential, c.grid, e.mass_bound);
  const DissipativeConstants dc = dissipative_constants(c.potential, kernel, sc.viscosity.nu1,
                                                        sc.forcing.tb_norm(c.grid), mean, e.R0_margin);
  AbsorptionConfig ac;
  ac.stepper = sc;
  ac.T = e.T;
  ac.sample_dt = e.sample_dt;
  ac.cfl_target = e.cfl_target;
  ac.threads = e.threads;
  prepare_output(c);
  const AbsorptionReport rep = absorption_experiment(ens, kernel, c.potential, ac, dc);
  write_text(path_in(c, "absorption.csv"), rep.to_csv());
  write_text(path_in(c, "absorption.txt"), rep.to_key_value());
  write_text(path_in(c, "constants.txt"), dc.to_key_value());
  out << rep.to_key_value();
  return kExitOk;
}

int cmd_contraction(const RunConfig& c, std::ostream& out) {
  if (!c.stepper) throw ValidationError("config: stepper block required");
  const ContractionExperiment e = contraction_experiment(c);
  const KernelField kernel = KernelField::build(c.grid, c.kernel);
  const GivenVelocity vel = ch_velocity(c.grid, ChMode::TorusSpectral, "cellular", e.velocity_amplitude);
  ChConfig cc;
  cc.dt = c.stepper->dt;
  cc.s_stab = c.stepper->s_stab;
  cc.cfl_limit = c.stepper->cfl_limit;
  const ScalarField phi0 = random_state(c.grid, 0.0, e.phi_amplitude, 0.0, 4, c.seed).phi;
  ScalarField delta = random_state(c.grid, 0.0, 1.0, 0.0, 4, c.seed + 1).phi;
  const double nd = l2_norm(delta);
  delta *= nd > 0.0 ? e.delta_norm / nd : 0.0;
  const ContractionReport rep = uniqueness_contraction_test(phi0, delta, vel, e.T, cc, kernel, c.potential);
  prepare_output(c);
  write_text(path_in(c, "contraction.txt"), rep.to_key_value());
  write_text(path_in(c, "contraction.csv"), rep.to_csv());
  out << rep.to_key_value();
  return kExitOk;
}

std::string json_error(const std::string& kind, const std::string& msg) {
  Json j{{"error", kind}, {"message", msg}};
  return j.dump();
}

}  // namespace

int run_subcommand(const std::string& sub, const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (sub == "simulate") return cmd_simulate(c, out);
    if (sub == "ch-only") return cmd_ch_only(c, out);
    if (sub == "check-assumptions") return cmd_check_assumptions(c, out);
    if (sub == "gronwall-verify") return cmd_gronwall(c, out);
    if (sub == "probe-attractor") return cmd_probe(c, out);
    if (sub == "contraction-test") return cmd_contraction(c, out);
    throw ValidationError("unknown subcommand '" + sub + "'");
  } catch (const Aborted& ex) {
    err << json_error("numerical_abort", ex.what()) << '\n';
    return kExitAborted;
  } catch (const NumericalAbort& ex) {
    err << json_error("numerical_abort", ex.what()) << '\n';
    return kExitAborted;
  } catch (const std::invalid_argument& ex) {
    err << json_error("validation", ex.what()) << '\n';
    return kExitValidation;
  } catch (const std::exception& ex) {
    err << json_error("io", ex.what()) << '\n';
    return kExitValidation;
  }
}

int run_subcommand(const std::string& sub, const std::string& config_path, std::ostream& out, std::ostream& err,
                   const std::string& output_override) {
  RunConfig c;
  try {
    c = load_config(config_path);
  } catch (const std::exception& ex) {
    err << json_error("validation", ex.what()) << '\n';
    return kExitValidation;
  }
  if (!output_override.empty()) c.output.directory = output_override;
  return run_subcommand(sub, c, out, err);
}

}  // namespace nlchns
