#include "nlchns/attractor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace nlchns {

namespace {

double potential_integral(const ScalarField& phi, const PotentialSpec& spec) {
  double s = 0.0;
  for (double v : phi.values()) s += potential_F(spec, v);
  return s * phi.grid().cell_area();
}

}  // namespace

double metric_d(const FlowState& a, const FlowState& b, const PotentialSpec& spec) {
  require_same_grid(a.grid(), b.grid(), "metric_d");
  VectorField du = a.u;
  du -= b.u;
  ScalarField dp = a.phi;
  dp -= b.phi;
  const double dF = potential_integral(a.phi, spec) - potential_integral(b.phi, spec);
  return l2_norm(du) + l2_norm(dp) + std::sqrt(std::abs(dF));
}

double hausdorff_semidist(const std::vector<FlowState>& A, const std::vector<FlowState>& B, const PotentialSpec& spec) {
  if (A.empty() || B.empty()) throw ValidationError("hausdorff_semidist: sets must be nonempty");
  double sup = 0.0;
  for (const auto& a : A) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& b : B) inf = std::min(inf, metric_d(a, b, spec));
    sup = std::max(sup, inf);
  }
  return sup;
}

double hausdorff_semidist(const EnsembleSet& A, const EnsembleSet& B, const PotentialSpec& spec) {
  return hausdorff_semidist(A.members, B.members, spec);
}

double preferred_mean(const PotentialSpec& spec, const GridSpec& grid, double m) {
  if (!(m >= 0.0)) throw ValidationError("mass bound must be nonnegative");
  const double smax = m / grid.area();
  if (smax == 0.0) return 0.0;
  const int n = 4000;
  double best = 0.0, fbest = potential_F(spec, 0.0);
  for (int i = 0; i <= n; ++i) {
    const double s = -smax + 2.0 * smax * i / n;
    const double f = potential_F(spec, s);
    if (f < fbest || (f == fbest && (std::abs(s) < std::abs(best) || (std::abs(s) == std::abs(best) && s > best)))) {
      best = s;
      fbest = f;
    }
  }
  double lo = std::max(-smax, best - 2.0 * smax / n), hi = std::min(smax, best + 2.0 * smax / n);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (potential_F(spec, x1) <= potential_F(spec, x2))
      hi = x2;
    else
      lo = x1;
  }
  const double s = 0.5 * (lo + hi);
  return potential_F(spec, s) < fbest ? s : best;
}

namespace {

struct Mode {
  int mx, my;
  double a, b;
};

std::vector<Mode> random_modes(std::mt19937_64& rng, int band, double decay) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Mode> modes;
  for (int mx = 0; mx <= band; ++mx)
    for (int my = -band; my <= band; ++my) {
      if (mx == 0 && my <= 0) continue;
      const double k2 = double(mx * mx + my * my);
      if (k2 > double(band * band)) continue;
      const double w = std::pow(1.0 + k2, -decay);
      const double a = nd(rng) * w;
      const double b = nd(rng) * w;
      modes.push_back({mx, my, a, b});
    }
  return modes;
}

// zero-mean phase shape with max|·| = 1 and a divergence-free velocity from a random stream function
void random_fields(const GridSpec& grid, int phase_band, int velocity_band, std::uint64_t seed, ScalarField& shape,
                   VectorField& u) {
  if (phase_band < 1 || velocity_band < 1 || 2 * phase_band >= int(grid.resolution) ||
      2 * velocity_band >= int(grid.resolution))
    throw ValidationError("random fields: bands must lie in [1, N/2)");
  std::mt19937_64 rng(seed);
  const auto pm = random_modes(rng, phase_band, 1.0);
  const auto vm = random_modes(rng, velocity_band, 1.0);
  const double k0 = grid.fundamental();
  const std::size_t N = grid.resolution;
  const double h = grid.spacing();
  shape = ScalarField(grid);
  u = VectorField(grid);
  for (std::size_t iy = 0; iy < N; ++iy)
    for (std::size_t ix = 0; ix < N; ++ix) {
      const double x = double(ix) * h, y = double(iy) * h;
      double p = 0.0, ux = 0.0, uy = 0.0;
      for (const auto& md : pm) {
        const double th = k0 * (md.mx * x + md.my * y);
        p += md.a * std::cos(th) + md.b * std::sin(th);
      }
      // u = (∂yψ, −∂xψ)
      for (const auto& md : vm) {
        const double th = k0 * (md.mx * x + md.my * y);
        const double dpsi = -md.a * std::sin(th) + md.b * std::cos(th);
        ux += k0 * md.my * dpsi;
        uy -= k0 * md.mx * dpsi;
      }
      shape.at(ix, iy) = p;
      u.x.at(ix, iy) = ux;
      u.y.at(ix, iy) = uy;
    }
  const double smax = max_abs(shape);
  if (smax > 0.0) shape *= 1.0 / smax;
}

}  // namespace

FlowState random_state(const GridSpec& grid, double phi_mean, double phi_amplitude, double velocity_amplitude,
                       int band, std::uint64_t seed) {
  ScalarField shape(grid);
  VectorField u(grid);
  random_fields(grid, band, band, seed, shape, u);
  FlowState s(grid);
  s.phi = shape;
  s.phi *= phi_amplitude;
  for (double& v : s.phi.values()) v += phi_mean;
  const double umax = max_abs(u);
  if (umax > 0.0) u *= velocity_amplitude / umax;
  s.u = u;
  return s;
}

EnsembleSet sample_initial_data(const GridSpec& grid, const KernelField& kernel, const PotentialSpec& spec, double m,
                                const std::vector<double>& energy_targets, std::uint64_t seed,
                                const InitialDataOptions& opts) {
  require_same_grid(grid, kernel.grid(), "sample_initial_data");
  if (energy_targets.empty()) throw ValidationError("sample_initial_data: no energy targets");
  if (opts.amplitude_samples < 2) throw ValidationError("sample_initial_data: amplitude_samples must be >= 2");
  const double mean = preferred_mean(spec, grid, m);

  EnsembleSet out;
  out.mass_bound = m;
  for (std::size_t i = 0; i < energy_targets.size(); ++i) {
    const double target = energy_targets[i];
    const std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (i + 1);
    ScalarField shape(grid);
    VectorField u(grid);
    random_fields(grid, opts.phase_band, opts.velocity_band, s, shape, u);

    auto phase_at = [&](double A) {
      ScalarField phi = shape;
      phi *= A;
      for (double& v : phi.values()) v += mean;
      return phi;
    };
    auto phase_energy = [&](double A) {
      FlowState st(grid);
      st.phi = phase_at(A);
      return energy(st, kernel, spec).E;
    };
    double best_A = -1.0, lowest = std::numeric_limits<double>::infinity();
    for (int j = opts.amplitude_samples; j >= 0; --j) {
      const double A = double(j) / opts.amplitude_samples;
      const double e = phase_energy(A);
      lowest = std::min(lowest, e);
      if (best_A < 0.0 && e <= target) best_A = A;
    }
    if (best_A < 0.0) {
      std::ostringstream os;
      os << std::setprecision(10) << "sample_initial_data: energy target " << target
         << " unreachable; attainable range is [" << lowest << ", inf)";
      throw ValidationError(os.str());
    }
    FlowState st(grid);
    st.phi = phase_at(best_A);
    const double Ephi = energy(st, kernel, spec).E;
    const double kin = 0.5 * inner(u, u);
    const double need = target - Ephi;
    if (need > 0.0 && kin > 0.0) {
      u *= std::sqrt(need / kin);
      st.u = u;
    }
    const double E = energy(st, kernel, spec).E;
    if (std::abs(E - target) > 0.01 * std::max(std::abs(target), 1e-300)) {
      std::ostringstream os;
      os << std::setprecision(10) << "sample_initial_data: reached E=" << E << " for target " << target
         << "; attainable range is [" << lowest << ", inf)";
      throw ValidationError(os.str());
    }
    if (std::abs(integral(st.phi)) > m * (1.0 + 1e-12) + 1e-12)
      throw ValidationError("sample_initial_data: mass constraint violated");
    out.members.push_back(std::move(st));
    out.seeds.push_back(s);
  }
  return out;
}

bool AbsorptionReport::all_within_bound() const {
  for (const auto& m : members) {
    if (m.blew_up) return false;
    if (m.entered && m.entry_time > m.t0_bound) return false;
    if (!m.entered && m.t0_bound <= T) return false;
  }
  return true;
}

bool AbsorptionReport::all_stayed() const {
  for (const auto& m : members)
    if (m.blew_up || (m.entered && !m.stayed_inside)) return false;
  return true;
}

std::string AbsorptionReport::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "member,E0,entry_time,t0_bound,stayed_inside\n";
  for (const auto& m : members)
    os << m.id << ',' << m.E0 << ',' << m.entry_time << ',' << m.t0_bound << ',' << (m.stayed_inside ? 1 : 0) << '\n';
  return os.str();
}

std::string AbsorptionReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  std::size_t blown = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& m : members) {
    if (m.blew_up) ++blown;
    if (m.entered) min_margin = std::min(min_margin, m.t0_bound - m.entry_time);
  }
  os << "R0=" << R0 << "\nT=" << T << "\nmembers=" << members.size() << "\nblown_up=" << blown
     << "\nmin_entry_margin=" << min_margin << "\nall_within_bound=" << (all_within_bound() ? "true" : "false")
     << "\nall_stayed_inside=" << (all_stayed() ? "true" : "false") << "\npassed=" << (passed() ? "true" : "false")
     << "\n";
  return os.str();
}

namespace {

void run_member(AbsorptionMember& rec, const FlowState& z0, const KernelField& kernel, const PotentialSpec& spec,
                const AbsorptionConfig& cfg, const DissipativeConstants& c) {
  const GridSpec& g = z0.grid();
  const FlowState zero(g);
  const double R0 = c.R0;
  const long long nseg = step_count(0.0, cfg.T, cfg.sample_dt);
  FlowState s = z0;
  s.t = 0.0;
  rec.d0 = metric_d(s, zero, spec);
  if (rec.d0 <= R0) {
    rec.entered = true;
    rec.entry_time = 0.0;
    rec.stayed_inside = true;
  }
  std::unique_ptr<Stepper> stepper;
  double cur_dt = -1.0;
  for (long long seg = 0; seg < nseg; ++seg) {
    const double umax = max_abs(s.u);
    double dt = cfg.stepper.dt;
    if (umax > 0.0) dt = std::min(dt, cfg.cfl_target * g.spacing() / umax);
    long long n = std::max(1LL, (long long)std::ceil(cfg.sample_dt / dt - 1e-9));
    FlowState next(g);
    bool done = false;
    for (int attempt = 0; attempt < 8 && !done; ++attempt, n *= 2) {
      const double sdt = cfg.sample_dt / double(n);
      if (sdt != cur_dt) {
        StepperConfig sc = cfg.stepper;
        sc.dt = sdt;
        stepper = std::make_unique<Stepper>(kernel, spec, sc);
        cur_dt = sdt;
      }
      try {
        next = s;
        for (long long k = 0; k < n; ++k) next = stepper->step(next);
        rec.steps += n;
        done = true;
      } catch (const CflViolation&) {
      }
    }
    if (!done) throw NumericalAbort("CFL could not be restored by step refinement", s);
    next.t = double(seg + 1) * cfg.sample_dt;
    if (!all_finite(next.phi) || !all_finite(next.u.x) || !all_finite(next.u.y))
      throw NumericalAbort("non-finite state", s);
    s = std::move(next);
    const double d = metric_d(s, zero, spec);
    if (!std::isfinite(d)) throw NumericalAbort("non-finite distance", s);
    if (!rec.entered && d <= R0) {
      rec.entered = true;
      rec.entry_time = s.t;
      rec.stayed_inside = true;
    } else if (rec.entered) {
      rec.max_d_after_entry = std::max(rec.max_d_after_entry, d);
      if (d > R0) rec.stayed_inside = false;
    }
  }
}

}  // namespace

AbsorptionReport absorption_experiment(const EnsembleSet& ensemble, const KernelField& kernel,
                                       const PotentialSpec& spec, const AbsorptionConfig& cfg,
                                       const DissipativeConstants& constants) {
  if (ensemble.empty()) throw ValidationError("absorption_experiment: empty ensemble");
  if (!(cfg.T >= 0.0) || !(cfg.sample_dt > 0.0) || !(cfg.cfl_target > 0.0) || cfg.cfl_target > cfg.stepper.cfl_limit)
    throw ValidationError("absorption_experiment: need T >= 0, sample_dt > 0, 0 < cfl_target <= cfl_limit");
  cfg.stepper.validate(spec);
  if (!cfg.stepper.forcing.is_zero() && cfg.stepper.forcing.kind != ForcingKind::Steady)
    throw ValidationError("absorption_experiment: forcing must be steady or zero");

  AbsorptionReport rep;
  rep.R0 = constants.R0;
  rep.T = cfg.T;
  rep.members.resize(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    rep.members[i].id = i;
    rep.members[i].E0 = energy(ensemble.members[i], kernel, spec).E;
    rep.members[i].t0_bound = constants.entry_time(rep.members[i].E0);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ensemble.size(); i = next++) {
      AbsorptionMember& rec = rep.members[i];
      try {
        run_member(rec, ensemble.members[i], kernel, spec, cfg, constants);
      } catch (const std::exception& e) {
        rec.blew_up = true;
        rec.stayed_inside = false;
        rec.error = e.what();
      }
    }
  };
  unsigned nt = cfg.threads > 0 ? unsigned(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, unsigned(ensemble.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rep;
}

EnsembleSet omega_limit_sample(const TrajectorySeries& run, const PotentialSpec& spec, double burn_in, double spacing,
                               double dedup_tol) {
  if (run.states.empty()) throw ValidationError("omega_limit_sample: empty run");
  if (!(spacing > 0.0)) throw ValidationError("omega_limit_sample: spacing must be positive");
  const double sdt = run.sample_dt();
  const double t0 = run.states.front().t;
  std::size_t i0 = run.states.size();
  for (std::size_t i = 0; i < run.states.size(); ++i)
    if (run.states[i].t - t0 >= burn_in - 1e-9 * std::max(1.0, burn_in)) {
      i0 = i;
      break;
    }
  if (i0 == run.states.size()) throw ValidationError("omega_limit_sample: run is not longer than burn_in");
  const auto stride = std::max<std::size_t>(1, std::size_t(std::llround(spacing / sdt)));
  EnsembleSet out;
  for (std::size_t i = i0; i < run.states.size(); i += stride) {
    const FlowState& z = run.states[i];
    bool dup = false;
    for (const auto& k : out.members)
      if (metric_d(z, k, spec) <= dedup_tol) {
        dup = true;
        break;
      }
    if (!dup) out.members.push_back(z);
  }
  double mmax = 0.0;
  for (const auto& z : out.members) mmax = std::max(mmax, std::abs(integral(z.phi)));
  out.mass_bound = mmax;
  return out;
}

std::vector<DecayPoint> semidistance_decay(const std::vector<TrajectorySeries>& runs, const EnsembleSet& sample,
                                           const PotentialSpec& spec) {
  if (runs.empty() || sample.empty()) throw ValidationError("semidistance_decay: empty input");
  std::size_t n = runs.front().states.size();
  for (const auto& r : runs) n = std::min(n, r.states.size());
  std::vector<DecayPoint> out;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<FlowState> A;
    for (const auto& r : runs) A.push_back(r.states[j]);
    out.push_back({runs.front().states[j].t, hausdorff_semidist(A, sample.members, spec)});
  }
  return out;
}

}  // namespace nlchns
