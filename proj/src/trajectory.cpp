#include "nlchns/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace nlchns {

NormSample norm_sample(SpectralOps& ops, const FlowState& s, const FlowState& prev, double dt) {
  NormSample n;
  n.u_l2 = l2_norm(s.u);
  n.phi_l4 = lp_norm(s.phi, 4.0);
  n.grad_u = std::sqrt(ops.gradient_norm_sq(s.u));
  n.grad_phi = std::sqrt(ops.gradient_norm_sq(s.phi));
  if (dt > 0.0) {
    n.phi_t_dual = ops.dual_norm((1.0 / dt) * (s.phi - prev.phi));
    n.u_t_dual = ops.dual_norm((1.0 / dt) * (s.u - prev.u));
  }
  return n;
}

NormTrace norm_trace(const TrajectorySeries& series) {
  NormTrace tr;
  if (series.states.empty()) return tr;
  tr.t0 = series.states.front().t;
  tr.dt = series.sample_dt();
  SpectralOps ops(series.states.front().grid());
  const auto& st = series.states;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (st.size() == 1)
      tr.samples.push_back(norm_sample(ops, st[0], st[0], 0.0));
    else if (i == 0) {
      NormSample n = norm_sample(ops, st[0], st[0], 0.0);
      const NormSample d = norm_sample(ops, st[1], st[0], tr.dt);
      n.phi_t_dual = d.phi_t_dual;
      n.u_t_dual = d.u_t_dual;
      tr.samples.push_back(n);
    } else
      tr.samples.push_back(norm_sample(ops, st[i], st[i - 1], tr.dt));
  }
  return tr;
}

NormTraceBuilder::NormTraceBuilder(const GridSpec& grid, double step_dt, int stride)
    : ops_(grid), step_dt_(step_dt), stride_(stride) {
  if (stride < 1) throw ValidationError("norm trace: stride must be >= 1");
  trace_.dt = step_dt * stride;
}

void NormTraceBuilder::add(const FlowState& prev, const FlowState& next) {
  if (steps_ == 0) {
    trace_.t0 = prev.t;
    NormSample n = norm_sample(ops_, prev, prev, 0.0);
    const NormSample d = norm_sample(ops_, next, prev, step_dt_);
    n.phi_t_dual = d.phi_t_dual;
    n.u_t_dual = d.u_t_dual;
    trace_.samples.push_back(n);
  }
  ++steps_;
  if (steps_ % stride_ == 0) trace_.samples.push_back(norm_sample(ops_, next, prev, step_dt_));
}

StepObserver NormTraceBuilder::observer() {
  return [this](const FlowState& prev, const FlowState& next, const EnergyLedgerEntry&) { add(prev, next); };
}

namespace {

SampledSignal component(const NormTrace& tr, double NormSample::*m) {
  SampledSignal s{tr.t0, tr.dt, std::vector<double>(tr.size())};
  for (std::size_t i = 0; i < tr.size(); ++i) s.values[i] = tr.samples[i].*m;
  return s;
}

// windowed ∫|g|^p for every start index
std::vector<double> window_integrals(const SampledSignal& g, double p, double window) {
  const auto w = std::size_t(std::llround(window / g.dt));
  if (w == 0 || g.size() < w + 1) throw ValidationError("trajectory norm: trajectory shorter than the window");
  SampledSignal a = g;
  for (double& v : a.values) v = std::pow(std::abs(v), p);
  const std::vector<double> I = cumulative_trapezoid(a);
  std::vector<double> out(I.size() - w);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = I[i + w] - I[i];
  return out;
}

}  // namespace

TrajectoryNormParts trajectory_norm_parts(const NormTrace& tr, double window, double u_t_exponent) {
  if (tr.size() == 0) throw ValidationError("trajectory norm: empty trace");
  TrajectoryNormParts p;
  for (const auto& s : tr.samples) p.sup_term = std::max(p.sup_term, s.u_l2 + s.phi_l4);
  p.grad_u_tb = tb_norm(component(tr, &NormSample::grad_u), 2.0, window);
  p.grad_phi_tb = tb_norm(component(tr, &NormSample::grad_phi), 2.0, window);
  p.phi_t_tb = tb_norm(component(tr, &NormSample::phi_t_dual), 2.0, window);
  p.u_t_tb = tb_norm(component(tr, &NormSample::u_t_dual), u_t_exponent, window);
  return p;
}

double trajectory_norm(const NormTrace& tr, double window, double u_t_exponent) {
  return trajectory_norm_parts(tr, window, u_t_exponent).total();
}

double trajectory_norm(const TrajectorySeries& series, double window, double u_t_exponent) {
  return trajectory_norm(norm_trace(series), window, u_t_exponent);
}

namespace {

std::size_t grid_index(double tau, double dt, std::size_t count, const char* what) {
  if (!(tau >= 0.0)) throw ValidationError(std::string(what) + ": tau must be nonnegative");
  const long long i = std::llround(tau / dt);
  if (std::abs(double(i) * dt - tau) > 1e-9 * std::max(1.0, tau))
    throw ValidationError(std::string(what) + ": tau is not on the sample grid");
  if (std::size_t(i) >= count) throw ValidationError(std::string(what) + ": tau exceeds the trajectory span");
  return std::size_t(i);
}

}  // namespace

TrajectorySeries translate(const TrajectorySeries& series, double tau) {
  const std::size_t i = grid_index(tau, series.sample_dt(), series.states.size(), "translate");
  TrajectorySeries out;
  out.step_dt = series.step_dt;
  out.store_every = series.store_every;
  out.states.assign(series.states.begin() + std::ptrdiff_t(i), series.states.end());
  for (std::size_t j = 0; j < out.states.size(); ++j)
    out.states[j].t = double(j * std::size_t(series.store_every)) * series.step_dt;
  const std::size_t li = i * std::size_t(series.store_every);
  if (li < series.ledger.size()) out.ledger.assign(series.ledger.begin() + std::ptrdiff_t(li), series.ledger.end());
  for (std::size_t j = 0; j < out.ledger.size(); ++j) out.ledger[j].t = double(j) * series.step_dt;
  return out;
}

NormTrace translate(const NormTrace& trace, double tau) {
  const std::size_t i = grid_index(tau, trace.dt, trace.size(), "translate");
  NormTrace out;
  out.t0 = 0.0;
  out.dt = trace.dt;
  out.samples.assign(trace.samples.begin() + std::ptrdiff_t(i), trace.samples.end());
  return out;
}

double ladyzhenskaya_constant() {
  const double c = 2.0 + 1.0 / (2.0 * std::numbers::pi);
  return c * c;
}

TrajectoryNormParts trajectory_bound(double B, const DissipativeConstants& c, double nu2) {
  TrajectoryNormParts p;
  const double pl = 2.0 + 2.0 * c.q;
  const double Y = std::max(0.0, B + c.C10_unshifted * c.area);
  const double U = std::sqrt(2.0 * Y);
  const double phi4 = std::pow(c.area, 0.25 - 1.0 / pl) * std::pow(Y / c.C9, 1.0 / pl);
  const double phi2 = std::sqrt(c.area) * phi4 * phi4;
  const double G = std::max(0.0, B + c.gamma) + c.h_tb_norm * c.h_tb_norm / (2.0 * c.nu1);
  const double gu2 = 2.0 * G / c.nu1;
  const double CL = ladyzhenskaya_constant();
  const double r2CL = std::sqrt(2.0 * CL);
  p.sup_term = U + phi4;
  p.grad_u_tb = std::sqrt(gu2);
  p.grad_phi_tb = std::sqrt((G + c.k4 * phi2) / c.k3);
  p.phi_t_tb = std::sqrt(2.0 * G + 2.0 * phi4 * phi4 * r2CL * U * std::sqrt(gu2));
  p.u_t_tb = std::sqrt(4.0 * ((2.0 * nu2 * nu2 + 2.0 * CL * U * U) * gu2 + r2CL * phi4 * phi4 * G +
                              c.h_tb_norm * c.h_tb_norm));
  return p;
}

MonitorReport trajectory_monitor(const NormTrace& tr, const std::vector<EnergyLedgerEntry>& ledger,
                              const DissipativeConstants& c, double nu2, double window) {
  if (ledger.empty()) throw ValidationError("trajectory monitor: empty ledger");
  MonitorReport r;
  const double lt0 = ledger.front().t;
  r.E_hat = -INFINITY;
  for (const auto& e : ledger)
    if (e.t - lt0 <= 1.0 + 1e-12) r.E_hat = std::max(r.E_hat, e.E);
  const double Eh = std::max(r.E_hat, 0.0);

  const auto W = window_integrals(component(tr, &NormSample::grad_u), 2.0, window);
  const auto Wp = window_integrals(component(tr, &NormSample::grad_phi), 2.0, window);
  const auto Wt = window_integrals(component(tr, &NormSample::phi_t_dual), 2.0, window);
  const auto Wu = window_integrals(component(tr, &NormSample::u_t_dual), 2.0, window);
  const std::size_t nw = W.size();
  std::vector<double> sgu(nw), sgp(nw), spt(nw), sut(nw), ssup(nw);
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (std::size_t j = nw; j-- > 0;) {
    m1 = std::max(m1, W[j]);
    m2 = std::max(m2, Wp[j]);
    m3 = std::max(m3, Wt[j]);
    m4 = std::max(m4, Wu[j]);
    sgu[j] = m1;
    sgp[j] = m2;
    spt[j] = m3;
    sut[j] = m4;
  }
  double ms = 0.0;
  std::vector<double> supt(tr.size());
  for (std::size_t j = tr.size(); j-- > 0;) {
    ms = std::max(ms, tr.samples[j].u_l2 + tr.samples[j].phi_l4);
    supt[j] = ms;
  }
  r.min_slack = INFINITY;
  r.min_relative_slack = INFINITY;
  for (std::size_t j = 0; j < nw; ++j) {
    const double t = tr.time(j) - tr.t0;
    if (t < 1.0 - 1e-12) continue;
    const double measured = supt[j] + std::sqrt(sgu[j]) + std::sqrt(sgp[j]) + std::sqrt(spt[j]) + std::sqrt(sut[j]);
    const double B = Eh * std::exp(-c.k * (t - 1.0)) + c.F_mean * c.area + c.K;
    const double bound = trajectory_bound(B, c, nu2).total();
    r.samples.push_back({t, measured, bound});
    r.min_slack = std::min(r.min_slack, bound - measured);
    r.min_relative_slack = std::min(r.min_relative_slack, (bound - measured) / bound);
  }
  r.holds = !r.samples.empty() && r.min_slack > 0.0;
  return r;
}

std::string MonitorReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "E_hat=" << E_hat << "\nmin_slack=" << min_slack << "\nmin_relative_slack=" << min_relative_slack
     << "\nsamples=" << samples.size() << "\nholds=" << (holds ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace nlchns
