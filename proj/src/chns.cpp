#include "nlchns/chns.hpp"

#include <cmath>
#include <sstream>

namespace nlchns {

namespace {
const Complex I(0.0, 1.0);
}

FlowState::FlowState(VectorField u_, ScalarField phi_, double t_) : u(std::move(u_)), phi(std::move(phi_)), t(t_) {
  require_same_grid(u.grid(), phi.grid(), "flow state");
}

std::string to_string(ForcingKind k) {
  switch (k) {
    case ForcingKind::Zero: return "zero";
    case ForcingKind::Steady: return "steady";
    case ForcingKind::Periodic: return "periodic";
  }
  return "zero";
}

ForcingKind forcing_kind_from_string(const std::string& s) {
  if (s == "zero") return ForcingKind::Zero;
  if (s == "steady") return ForcingKind::Steady;
  if (s == "periodic") return ForcingKind::Periodic;
  throw ValidationError("forcing: unknown kind '" + s + "'");
}

void ForcingSpec::validate() const {
  if (!std::isfinite(amplitude)) throw ValidationError("forcing: amplitude must be finite");
  if (kind != ForcingKind::Zero && mx == 0 && my == 0) throw ValidationError("forcing: mode must be nonzero");
  if (kind == ForcingKind::Periodic && !(period > 0.0)) throw ValidationError("forcing: period must be positive");
}

double ForcingSpec::time_factor(double t) const {
  switch (kind) {
    case ForcingKind::Zero: return 0.0;
    case ForcingKind::Steady: return 1.0;
    case ForcingKind::Periodic: return std::sin(2.0 * std::numbers::pi * t / period);
  }
  return 0.0;
}

VectorField ForcingSpec::evaluate(const GridSpec& grid, double t) const {
  VectorField h(grid);
  if (is_zero()) return h;
  const double k0 = grid.fundamental();
  const double kx = k0 * mx, ky = k0 * my, kn = std::hypot(kx, ky);
  const double A = amplitude * time_factor(t);
  const int N = grid.resolution;
  const double dx = grid.spacing();
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      const double s = std::sin(kx * ix * dx + ky * iy * dx);
      h.x.at(ix, iy) = -A * ky / kn * s;
      h.y.at(ix, iy) = A * kx / kn * s;
    }
  return h;
}

double ForcingSpec::profile_dual_norm(const GridSpec& grid) const {
  if (is_zero()) return 0.0;
  const double kn = grid.fundamental() * std::hypot(double(mx), double(my));
  return std::abs(amplitude) * std::sqrt(grid.area() / 2.0) / kn;
}

double ForcingSpec::tb_norm(const GridSpec& grid) const {
  const double n = profile_dual_norm(grid);
  if (kind != ForcingKind::Periodic) return n;
  const double w = 2.0 * std::numbers::pi / period;
  return n * std::sqrt(0.5 + std::abs(std::sin(w)) / (2.0 * w));
}

void StepperConfig::validate(const PotentialSpec& spec) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("stepper: dt must be positive");
  if (!(viscosity.nu1 > 0.0) || !(viscosity.nu2 > 0.0)) throw ValidationError("stepper: nu1 and nu2 must be positive");
  if (viscosity.nu1 > viscosity.nu2) throw ValidationError("stepper: nu1 must not exceed nu2");
  if (nu_bar < 0.0) throw ValidationError("stepper: nu_bar must be nonnegative");
  if (!(cfl_limit > 0.0)) throw ValidationError("stepper: cfl_limit must be positive");
  const double need = 0.5 * std::max(0.0, -curvature_inf(spec));
  if (!(s_stab >= need)) {
    std::ostringstream os;
    os << "stepper: s_stab = " << s_stab << " below the required " << need;
    throw ValidationError(os.str());
  }
  forcing.validate();
}

void advance_phase(SpectralOps& ops, const KernelField& kernel, const PotentialSpec& spec, double dt, double s_stab,
                   const ScalarField& phi, const VectorField* u, ScalarField& phi_next, Spectrum* mu_hat,
                   Spectrum* phi_hat) {
  const GridSpec& g = ops.grid();
  require_same_grid(g, kernel.grid(), "advance_phase");
  require_same_grid(g, phi.grid(), "advance_phase");
  Spectrum ph = ops.forward(phi);
  ScalarField work(g);
  for (std::size_t i = 0; i < work.size(); ++i) work[i] = potential_dF(spec, phi[i]);
  Spectrum X = ops.forward(work);
  ops.truncate(X);
  const Spectrum& J = kernel.spectrum();
  const double a0 = kernel.a_mean();
  for (std::size_t i = 0; i < X.size(); ++i)
    if (ops.in_band(i)) X[i] -= J[i] * ph[i];

  Spectrum D(g);
  if (u) {
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = u->x[i] * phi[i];
    const Spectrum Ax = ops.forward(work);
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = u->y[i] * phi[i];
    const Spectrum Ay = ops.forward(work);
    for (std::size_t i = 0; i < D.size(); ++i)
      if (ops.in_band(i)) D[i] = I * (ops.dkx(i) * Ax[i] + ops.dky(i) * Ay[i]);
  }

  Spectrum next(g);
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (!ops.in_band(i)) continue;
    const double k2 = ops.k2(i);
    next[i] = (ph[i] * (1.0 + dt * k2 * s_stab) - dt * k2 * X[i] - dt * D[i]) / (1.0 + dt * k2 * (a0 + s_stab));
  }
  next[0] = ph[0];
  if (mu_hat) {
    *mu_hat = Spectrum(g);
    for (std::size_t i = 0; i < X.size(); ++i)
      if (ops.in_band(i)) (*mu_hat)[i] = a0 * ph[i] + X[i];
  }
  ops.inverse_into(next, phi_next);
  if (phi_hat) *phi_hat = std::move(ph);
}

ScalarField chemical_potential(const KernelField& kernel, const PotentialSpec& spec, const ScalarField& phi) {
  require_same_grid(kernel.grid(), phi.grid(), "chemical_potential");
  SpectralOps ops(phi.grid());
  const ScalarField Jphi = convolve(ops, kernel, phi);
  ScalarField mu(phi.grid());
  const ScalarField& a = kernel.a_field();
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = a[i] * phi[i] - Jphi[i] + potential_dF(spec, phi[i]);
  return mu;
}

VectorField korteweg_force(const ScalarField& phi, const ScalarField& mu) {
  require_same_grid(phi.grid(), mu.grid(), "korteweg_force");
  SpectralOps ops(phi.grid());
  const VectorField gm = ops.gradient(mu);
  ScalarField fx(phi.grid()), fy(phi.grid());
  for (std::size_t i = 0; i < fx.size(); ++i) {
    fx[i] = -phi[i] * gm.x[i];
    fy[i] = -phi[i] * gm.y[i];
  }
  return VectorField(ops.dealias(fx), ops.dealias(fy));
}

double trilinear_b(const VectorField& u, const VectorField& v, const VectorField& w) {
  require_same_grid(u.grid(), v.grid(), "trilinear_b");
  require_same_grid(u.grid(), w.grid(), "trilinear_b");
  SpectralOps ops(u.grid());
  const VectorField gvx = ops.gradient(v.x);
  const VectorField gvy = ops.gradient(v.y);
  double s = 0.0;
  for (std::size_t i = 0; i < u.x.size(); ++i) {
    s += (u.x[i] * gvx.x[i] + u.y[i] * gvx.y[i]) * w.x[i];
    s += (u.x[i] * gvy.x[i] + u.y[i] * gvy.y[i]) * w.y[i];
  }
  return s * u.grid().cell_area();
}

Stepper::Stepper(const KernelField& kernel, const PotentialSpec& spec, const StepperConfig& cfg)
    : kernel_(kernel), spec_(spec), cfg_(cfg), ops_(kernel.grid()) {
  spec_.validate();
  cfg_.validate(spec_);
}

void Stepper::check_cfl(const FlowState& s) const {
  require_same_grid(s.grid(), grid(), "step");
  const double umax = max_abs(s.u);
  if (umax > 0.0 && cfg_.dt > cfg_.cfl_limit * grid().spacing() / umax) {
    std::ostringstream os;
    os << "CFL violated at t=" << s.t << ": dt=" << cfg_.dt << " > " << cfg_.cfl_limit * grid().spacing() / umax
       << " (max|u|=" << umax << ")";
    throw CflViolation(os.str());
  }
}

FlowState Stepper::step(const FlowState& s) { return step_impl(s, nullptr, true); }

FlowState Stepper::step(const FlowState& s, EnergyLedgerEntry& entry_of_s) { return step_impl(s, &entry_of_s, true); }

EnergyLedgerEntry Stepper::ledger_entry(const FlowState& s) {
  EnergyLedgerEntry e;
  step_impl(s, &e, false);
  return e;
}

ScalarField Stepper::chemical_potential(const ScalarField& phi) {
  Spectrum mu(grid());
  ScalarField scratch(grid());
  advance_phase(ops_, kernel_, spec_, cfg_.dt, cfg_.s_stab, phi, nullptr, scratch, &mu);
  return ops_.inverse(mu);
}

FlowState Stepper::step_impl(const FlowState& s, EnergyLedgerEntry* entry, bool check) {
  if (check) check_cfl(s);
  require_same_grid(s.grid(), grid(), "step");
  const GridSpec& g = grid();
  const double dt = cfg_.dt;
  const double nub = cfg_.mean_viscosity();

  FlowState out(g);
  out.t = s.t + dt;
  Spectrum mu(g), ph(g);
  advance_phase(ops_, kernel_, spec_, dt, cfg_.s_stab, s.phi, &s.u, out.phi, &mu, &ph);

  Spectrum ux = ops_.forward(s.u.x);
  Spectrum uy = ops_.forward(s.u.y);
  Spectrum tmp(g);
  auto deriv = [&](const Spectrum& f, bool xdir) {
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = I * (xdir ? ops_.dkx(i) : ops_.dky(i)) * f[i];
    return ops_.inverse(tmp);
  };
  const ScalarField uxx = deriv(ux, true), uxy = deriv(ux, false);
  const ScalarField uyx = deriv(uy, true), uyy = deriv(uy, false);
  const ScalarField mux = deriv(mu, true), muy = deriv(mu, false);

  ScalarField nx(g), ny(g), sxx(g), sxy(g), syy(g);
  double visc = 0.0, mudiss = 0.0;
  const ScalarField& phi = s.phi;
  for (std::size_t i = 0; i < nx.size(); ++i) {
    const double w = uyx[i] - uxy[i];
    nx[i] = w * s.u.y[i] - phi[i] * mux[i];
    ny[i] = -w * s.u.x[i] - phi[i] * muy[i];
    const double nu = cfg_.viscosity(phi[i]);
    const double d = nu - nub;
    const double dxy = 0.5 * (uxy[i] + uyx[i]);
    sxx[i] = 2.0 * d * uxx[i];
    syy[i] = 2.0 * d * uyy[i];
    sxy[i] = 2.0 * d * dxy;
    visc += 2.0 * nu * (uxx[i] * uxx[i] + uyy[i] * uyy[i] + 2.0 * dxy * dxy);
    mudiss += mux[i] * mux[i] + muy[i] * muy[i];
  }
  Spectrum Nx = ops_.forward(nx), Ny = ops_.forward(ny);
  const Spectrum Sxx = ops_.forward(sxx), Sxy = ops_.forward(sxy), Syy = ops_.forward(syy);
  double power = 0.0;
  if (!cfg_.forcing.is_zero()) {
    const VectorField h = cfg_.forcing.evaluate(g, s.t);
    power = inner(h, s.u);
    const Spectrum hx = ops_.forward(h.x), hy = ops_.forward(h.y);
    for (std::size_t i = 0; i < Nx.size(); ++i) {
      Nx[i] += hx[i];
      Ny[i] += hy[i];
    }
  }
  for (std::size_t i = 0; i < Nx.size(); ++i) {
    if (!ops_.in_band(i)) {
      Nx[i] = Ny[i] = 0.0;
      continue;
    }
    Nx[i] += I * (ops_.dkx(i) * Sxx[i] + ops_.dky(i) * Sxy[i]);
    Ny[i] += I * (ops_.dkx(i) * Sxy[i] + ops_.dky(i) * Syy[i]);
  }
  ops_.leray_project(Nx, Ny);
  for (std::size_t i = 0; i < ux.size(); ++i) {
    if (!ops_.in_band(i)) {
      ux[i] = uy[i] = 0.0;
      continue;
    }
    const double den = 1.0 + dt * nub * ops_.k2(i);
    ux[i] = (ux[i] + dt * Nx[i]) / den;
    uy[i] = (uy[i] + dt * Ny[i]) / den;
  }
  ux[0] = uy[0] = 0.0;
  ops_.leray_project(ux, uy);
  ops_.inverse_into(ux, out.u.x);
  ops_.inverse_into(uy, out.u.y);

  if (entry) {
    const double dA = g.cell_area();
    EnergyLedgerEntry& e = *entry;
    e.t = s.t;
    e.kinetic = 0.5 * inner(s.u, s.u);
    const Spectrum& J = kernel_.spectrum();
    const double a0 = kernel_.a_mean();
    e.nonlocal = 0.5 * ops_.weighted_norm_sq(ph, [&](std::size_t i) { return a0 - J[i].real(); });
    double pot = 0.0;
    for (double v : phi.values()) pot += potential_F(spec_, v);
    e.potential = pot * dA;
    e.E = e.kinetic + e.nonlocal + e.potential;
    e.visc_dissipation = visc * dA;
    e.mu_dissipation = mudiss * dA;
    e.forcing_power = power;
    e.mass = integral(phi);
  }

  if (check && !(all_finite(out.u) && all_finite(out.phi))) {
    std::ostringstream os;
    os << "non-finite values after step from t=" << s.t;
    throw NumericalAbort(os.str(), s);
  }
  return out;
}

long long step_count(double t0, double T_final, double dt) {
  if (!(T_final >= t0)) throw ValidationError("simulate: T_final must not precede the initial time");
  const double r = (T_final - t0) / dt;
  return (long long)std::ceil(r - 1e-9 * std::max(1.0, r));
}

TrajectorySeries simulate(const FlowState& state0, Stepper& stepper, double T_final, const SimulateOptions& opts) {
  if (opts.store_every < 1) throw ValidationError("simulate: store_every must be >= 1");
  const double dt = stepper.config().dt;
  const long long n = step_count(state0.t, T_final, dt);
  TrajectorySeries series;
  series.step_dt = dt;
  series.store_every = opts.store_every;
  series.states.push_back(state0);
  series.ledger.reserve(std::size_t(n) + 1);
  FlowState cur = state0;
  for (long long k = 0; k < n; ++k) {
    EnergyLedgerEntry e;
    FlowState next(cur.grid());
    try {
      next = stepper.step(cur, e);
    } catch (const NumericalAbort& ex) {
      series.ledger.push_back(stepper.ledger_entry(ex.last_valid()));
      throw SimulationAborted(ex.what(), std::move(series));
    } catch (const CflViolation& ex) {
      if (k == 0) throw;
      series.ledger.push_back(stepper.ledger_entry(cur));
      throw SimulationAborted(ex.what(), std::move(series));
    }
    next.t = state0.t + double(k + 1) * dt;
    series.ledger.push_back(e);
    for (const auto& obs : opts.observers) obs(cur, next, e);
    if ((k + 1) % opts.store_every == 0) series.states.push_back(next);
    cur = std::move(next);
  }
  series.ledger.push_back(stepper.ledger_entry(cur));
  return series;
}

}  // namespace nlchns
