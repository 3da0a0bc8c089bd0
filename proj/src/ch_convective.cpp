#include "nlchns/ch_convective.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace nlchns {

std::string to_string(ChMode m) { return m == ChMode::TorusSpectral ? "torus-spectral" : "bounded-fd"; }

ChMode ch_mode_from_string(const std::string& s) {
  if (s == "torus-spectral") return ChMode::TorusSpectral;
  if (s == "bounded-fd") return ChMode::BoundedFd;
  throw ValidationError("ch: unknown mode '" + s + "'");
}

GivenVelocity GivenVelocity::zero(const GridSpec& grid, ChMode mode) {
  GivenVelocity v(grid);
  v.mode = mode;
  if (mode == ChMode::BoundedFd) {
    const std::size_t N = grid.resolution;
    v.face_x.assign((N + 1) * N, 0.0);
    v.face_y.assign(N * (N + 1), 0.0);
  }
  return v;
}

GivenVelocity GivenVelocity::from_stream_function(const GridSpec& grid, ChMode mode,
                                                  const std::function<double(double, double)>& psi) {
  GivenVelocity v = zero(grid, mode);
  const int N = grid.resolution;
  const double h = grid.spacing();
  if (mode == ChMode::TorusSpectral) {
    SpectralOps ops(grid);
    const ScalarField p = ops.dealias(ScalarField::sample(grid, psi));
    const VectorField g = ops.gradient(p);
    v.cells = VectorField(g.y, -1.0 * g.x);
    v.sup_norm = max_abs(v.cells);
  } else {
    // corners (i − ½)h, i = 0..N
    std::vector<double> c(std::size_t(N + 1) * (N + 1), 0.0);
    auto C = [&](int ix, int iy) -> double& { return c[std::size_t(iy) * (N + 1) + ix]; };
    for (int iy = 1; iy < N; ++iy)
      for (int ix = 1; ix < N; ++ix) C(ix, iy) = psi((ix - 0.5) * h, (iy - 0.5) * h);
    for (int iy = 0; iy < N; ++iy)
      for (int ix = 0; ix <= N; ++ix) v.face_x[std::size_t(iy) * (N + 1) + ix] = (C(ix, iy + 1) - C(ix, iy)) / h;
    for (int iy = 0; iy <= N; ++iy)
      for (int ix = 0; ix < N; ++ix) v.face_y[std::size_t(iy) * N + ix] = -(C(ix + 1, iy) - C(ix, iy)) / h;
    double m = 0.0;
    for (double f : v.face_x) m = std::max(m, std::abs(f));
    for (double f : v.face_y) m = std::max(m, std::abs(f));
    v.sup_norm = m;
    for (int iy = 0; iy < N; ++iy)
      for (int ix = 0; ix < N; ++ix) {
        v.cells.x.at(ix, iy) = 0.5 * (v.face_x[std::size_t(iy) * (N + 1) + ix] + v.face_x[std::size_t(iy) * (N + 1) + ix + 1]);
        v.cells.y.at(ix, iy) = 0.5 * (v.face_y[std::size_t(iy) * N + ix] + v.face_y[std::size_t(iy + 1) * N + ix]);
      }
  }
  v.divergence_free = v.max_divergence() <= 1e-10 * std::max(1.0, v.sup_norm / h);
  return v;
}

GivenVelocity GivenVelocity::from_field(const VectorField& u) {
  GivenVelocity v(u.grid());
  v.mode = ChMode::TorusSpectral;
  v.cells = u;
  v.sup_norm = max_abs(u);
  v.divergence_free = v.max_divergence() <= 1e-10 * std::max(1.0, v.sup_norm / u.grid().spacing());
  if (!v.divergence_free) throw ValidationError("given velocity: field is not divergence-free");
  return v;
}

double GivenVelocity::max_divergence() const {
  if (mode == ChMode::TorusSpectral) return max_abs(divergence(cells));
  const int N = grid().resolution;
  const double h = grid().spacing();
  double m = 0.0;
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      const double d = (face_x[std::size_t(iy) * (N + 1) + ix + 1] - face_x[std::size_t(iy) * (N + 1) + ix]) / h +
                       (face_y[std::size_t(iy + 1) * N + ix] - face_y[std::size_t(iy) * N + ix]) / h;
      m = std::max(m, std::abs(d));
    }
  return m;
}

GivenVelocity GivenVelocity::scaled(double s) const {
  GivenVelocity v = *this;
  v.cells *= s;
  for (double& f : v.face_x) f *= s;
  for (double& f : v.face_y) f *= s;
  v.sup_norm *= std::abs(s);
  return v;
}

void ChConfig::validate(const PotentialSpec& spec) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("ch: dt must be positive");
  if (!(cfl_limit > 0.0)) throw ValidationError("ch: cfl_limit must be positive");
  const double need = 0.5 * std::max(0.0, -curvature_inf(spec));
  if (!(s_stab >= need)) throw ValidationError("ch: s_stab below the stabilization requirement");
}

struct ChSolver::Bounded {
  int N;
  double h;
  CosineTransform dct;
  RealFft pad;
  std::vector<Complex> khat;
  std::vector<double> lambda;
  ScalarField a;
  double a0 = 0.0;
  std::vector<double> pbuf;
  std::vector<Complex> sbuf;

  Bounded(const KernelField& kernel, const GridSpec& g)
      : N(g.resolution), h(g.spacing()), dct(N), pad(2 * N, 2 * N), a(g) {
    const int M = 2 * N;
    std::vector<double> K(std::size_t(M) * M, 0.0);
    for (int r = 0; r < M; ++r) {
      const int my = r < N ? r : r - M;
      if (my == -N) continue;
      for (int c = 0; c < M; ++c) {
        const int mx = c < N ? c : c - M;
        if (mx == -N) continue;
        K[std::size_t(r) * M + c] = kernel.free_space(mx * h, my * h);
      }
    }
    khat.resize(std::size_t(M) * (M / 2 + 1));
    pad.forward(K.data(), khat.data());
    for (auto& z : khat) z *= h * h;
    lambda.resize(std::size_t(N) * N);
    for (int q = 0; q < N; ++q)
      for (int p = 0; p < N; ++p)
        lambda[std::size_t(q) * N + p] =
            (2.0 - 2.0 * std::cos(std::numbers::pi * p / N)) / (h * h) + (2.0 - 2.0 * std::cos(std::numbers::pi * q / N)) / (h * h);
    pbuf.resize(std::size_t(M) * M);
    sbuf.resize(khat.size());
    a = convolve(ScalarField(g, 1.0));
    a0 = mean(a);
  }

  ScalarField convolve(const ScalarField& phi) {
    const int M = 2 * N;
    std::fill(pbuf.begin(), pbuf.end(), 0.0);
    for (int iy = 0; iy < N; ++iy)
      for (int ix = 0; ix < N; ++ix) pbuf[std::size_t(iy) * M + ix] = phi.at(ix, iy);
    pad.forward(pbuf.data(), sbuf.data());
    for (std::size_t i = 0; i < sbuf.size(); ++i) sbuf[i] *= khat[i];
    pad.inverse(sbuf.data(), pbuf.data());
    ScalarField out(phi.grid());
    for (int iy = 0; iy < N; ++iy)
      for (int ix = 0; ix < N; ++ix) out.at(ix, iy) = pbuf[std::size_t(iy) * M + ix];
    return out;
  }

  // Neumann five-point Laplacian with reflected ghost cells
  ScalarField laplacian(const ScalarField& f) const {
    ScalarField out(f.grid());
    for (int iy = 0; iy < N; ++iy)
      for (int ix = 0; ix < N; ++ix) {
        const double c = f.at(ix, iy);
        const double l = f.at(std::max(ix - 1, 0), iy), r = f.at(std::min(ix + 1, N - 1), iy);
        const double d = f.at(ix, std::max(iy - 1, 0)), u = f.at(ix, std::min(iy + 1, N - 1));
        out.at(ix, iy) = (l + r + d + u - 4.0 * c) / (h * h);
      }
    return out;
  }
};

ChSolver::ChSolver(const KernelField& kernel, const PotentialSpec& spec, const GivenVelocity& vel, const ChConfig& cfg)
    : kernel_(kernel), spec_(spec), vel_(vel), cfg_(cfg) {
  require_same_grid(kernel.grid(), vel.grid(), "ch solver");
  spec_.validate();
  cfg_.validate(spec_);
  if (!vel_.divergence_free) throw ValidationError("ch: velocity must be divergence-free");
  if (vel_.sup_norm > 0.0 && cfg_.dt > cfg_.cfl_limit * grid().spacing() / vel_.sup_norm)
    throw CflViolation("ch: CFL violated by the given velocity");
  if (vel_.mode == ChMode::TorusSpectral)
    ops_ = std::make_unique<SpectralOps>(grid());
  else {
    if (grid().resolution > 128) throw ValidationError("ch: bounded-fd mode is limited to N <= 128");
    bounded_ = std::make_unique<Bounded>(kernel_, grid());
  }
}

ChSolver::~ChSolver() = default;

const ScalarField& ChSolver::a_field() const { return bounded_ ? bounded_->a : kernel_.a_field(); }

ScalarField ChSolver::convolve(const ScalarField& phi) {
  if (bounded_) return bounded_->convolve(phi);
  return nlchns::convolve(*ops_, kernel_, phi);
}

ScalarField ChSolver::step(const ScalarField& phi) {
  require_same_grid(phi.grid(), grid(), "ch_step");
  ScalarField next(grid());
  if (bounded_)
    next = step_bounded(phi);
  else
    advance_phase(*ops_, kernel_, spec_, cfg_.dt, cfg_.s_stab, phi, &vel_.cells, next);
  if (!all_finite(next)) throw NumericalAbort("ch: non-finite values", FlowState(VectorField(grid()), phi));
  return next;
}

ScalarField ChSolver::step_bounded(const ScalarField& phi) {
  Bounded& b = *bounded_;
  const int N = b.N;
  const double h = b.h, dt = cfg_.dt, s = cfg_.s_stab;
  const ScalarField Jphi = b.convolve(phi);
  ScalarField Y(grid()), D(grid());
  for (std::size_t i = 0; i < Y.size(); ++i)
    Y[i] = -s * phi[i] + (b.a[i] - b.a0) * phi[i] - Jphi[i] + potential_dF(spec_, phi[i]);
  const auto& fx = vel_.face_x;
  const auto& fy = vel_.face_y;
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      auto flux_x = [&](int f) {
        if (f == 0 || f == N) return 0.0;
        return fx[std::size_t(iy) * (N + 1) + f] * 0.5 * (phi.at(f - 1, iy) + phi.at(f, iy));
      };
      auto flux_y = [&](int f) {
        if (f == 0 || f == N) return 0.0;
        return fy[std::size_t(f) * N + ix] * 0.5 * (phi.at(ix, f - 1) + phi.at(ix, f));
      };
      D.at(ix, iy) = (flux_x(ix + 1) - flux_x(ix)) / h + (flux_y(iy + 1) - flux_y(iy)) / h;
    }
  std::vector<double> P(Y.size()), Yh(Y.size()), Dh(Y.size());
  b.dct.forward(phi.data(), P.data());
  b.dct.forward(Y.data(), Yh.data());
  b.dct.forward(D.data(), Dh.data());
  Dh[0] = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double lam = b.lambda[i];
    P[i] = (P[i] - dt * lam * Yh[i] - dt * Dh[i]) / (1.0 + dt * lam * (b.a0 + s));
  }
  ScalarField out(grid());
  b.dct.inverse(P.data(), out.data());
  return out;
}

ChTerms ChSolver::terms(const ScalarField& phi) {
  require_same_grid(phi.grid(), grid(), "ch terms");
  if (bounded_) return terms_bounded(phi);
  SpectralOps& ops = *ops_;
  Spectrum mu(grid()), ph(grid());
  ScalarField scratch(grid());
  advance_phase(ops, kernel_, spec_, cfg_.dt, cfg_.s_stab, phi, nullptr, scratch, &mu, &ph);
  const Complex I(0.0, 1.0);
  Spectrum t(grid());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = I * ops.dkx(i) * mu[i];
  const ScalarField mx = ops.inverse(t);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = I * ops.dky(i) * mu[i];
  const ScalarField my = ops.inverse(t);
  ChTerms r;
  const Spectrum& J = kernel_.spectrum();
  const double a0 = kernel_.a_mean();
  const double nl = 0.5 * ops.weighted_norm_sq(ph, [&](std::size_t i) { return a0 - J[i].real(); });
  double pot = 0.0, g2 = 0.0, adv = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    pot += potential_F(spec_, phi[i]);
    g2 += mx[i] * mx[i] + my[i] * my[i];
    adv += phi[i] * (vel_.cells.x[i] * mx[i] + vel_.cells.y[i] * my[i]);
  }
  const double dA = grid().cell_area();
  r.energy = nl + pot * dA;
  r.grad_mu_sq = g2 * dA;
  r.advective_power = adv * dA;
  r.mass = integral(phi);
  return r;
}

ChTerms ChSolver::terms_bounded(const ScalarField& phi) {
  Bounded& b = *bounded_;
  const int N = b.N;
  const double h = b.h;
  const ScalarField Jphi = b.convolve(phi);
  ScalarField mu(grid());
  double nl = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = b.a[i] * phi[i] - Jphi[i] + potential_dF(spec_, phi[i]);
    nl += b.a[i] * phi[i] * phi[i] - phi[i] * Jphi[i];
    pot += potential_F(spec_, phi[i]);
  }
  double g2 = 0.0, adv = 0.0;
  for (int iy = 0; iy < N; ++iy)
    for (int f = 1; f < N; ++f) {
      const double g = (mu.at(f, iy) - mu.at(f - 1, iy)) / h;
      g2 += g * g;
      adv += vel_.face_x[std::size_t(iy) * (N + 1) + f] * 0.5 * (phi.at(f - 1, iy) + phi.at(f, iy)) * g;
    }
  for (int f = 1; f < N; ++f)
    for (int ix = 0; ix < N; ++ix) {
      const double g = (mu.at(ix, f) - mu.at(ix, f - 1)) / h;
      g2 += g * g;
      adv += vel_.face_y[std::size_t(f) * N + ix] * 0.5 * (phi.at(ix, f - 1) + phi.at(ix, f)) * g;
    }
  const double dA = h * h;
  ChTerms r;
  r.energy = 0.5 * nl * dA + pot * dA;
  r.grad_mu_sq = g2 * dA;
  r.advective_power = adv * dA;
  r.mass = integral(phi);
  return r;
}

ScalarField ch_step(const ScalarField& phi, const GivenVelocity& vel, const ChConfig& cfg, const KernelField& kernel,
                    const PotentialSpec& spec) {
  ChSolver s(kernel, spec, vel, cfg);
  return s.step(phi);
}

std::vector<ScalarField> ch_run(ChSolver& solver, const ScalarField& phi0, long long steps) {
  std::vector<ScalarField> out;
  out.reserve(std::size_t(steps) + 1);
  out.push_back(phi0);
  for (long long n = 0; n < steps; ++n) out.push_back(solver.step(out.back()));
  return out;
}

ResidualSummary ch_energy_residual(const std::vector<ScalarField>& series, ChSolver& solver) {
  ResidualSummary r;
  if (series.size() < 2) return r;
  const double dt = solver.config().dt;
  ChTerms prev = solver.terms(series[0]);
  for (std::size_t n = 0; n + 1 < series.size(); ++n) {
    const ChTerms next = solver.terms(series[n + 1]);
    const double diss = dt * prev.grad_mu_sq;
    const double force = dt * prev.advective_power;
    const double res = next.energy - prev.energy + diss - force;
    r.residuals.push_back(res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
    r.sum += res;
    r.sum_abs += std::abs(res);
    r.total_dissipation += diss;
    r.total_forcing += force;
    prev = next;
  }
  return r;
}

ResidualSummary ch_energy_residual(const std::vector<ScalarField>& series, const GivenVelocity& vel,
                                   const ChConfig& cfg, const KernelField& kernel, const PotentialSpec& spec) {
  ChSolver s(kernel, spec, vel, cfg);
  return ch_energy_residual(series, s);
}

double contraction_exponent(double c0, double kernel_grad_l1, double u_star) {
  if (!(c0 > 0.0)) throw ValidationError("contraction: c0 must be positive");
  const double C2 = kernel_grad_l1 * kernel_grad_l1 / c0;
  return 2.0 * C2 + u_star * u_star / c0;
}

ContractionReport uniqueness_contraction_test(const ScalarField& phi0, const ScalarField& delta,
                                              const GivenVelocity& vel, double T, const ChConfig& cfg,
                                              const KernelField& kernel, const PotentialSpec& spec) {
  if (vel.mode != ChMode::TorusSpectral) throw ValidationError("contraction: torus mode only");
  require_same_grid(phi0.grid(), delta.grid(), "contraction");
  const double scale = std::max(max_abs(delta), 1e-300);
  if (std::abs(integral(delta)) > 1e-10 * delta.grid().area() * scale)
    throw ValidationError("contraction: perturbation must have zero mean");
  const AssumptionReport rep = verify_assumptions(spec, kernel);
  if (!rep.convexity) throw ValidationError("contraction: convexity fails, c0 <= 0");

  ContractionReport r;
  r.c0 = rep.c0;
  r.u_star = vel.sup_norm;
  r.kernel_grad_l1 = kernel.grad_l1_norm();
  r.C1 = 2.0;
  r.C2 = r.kernel_grad_l1 * r.kernel_grad_l1 / r.c0;
  r.C = contraction_exponent(r.c0, r.kernel_grad_l1, r.u_star);

  ChSolver s1(kernel, spec, vel, cfg), s2(kernel, spec, vel, cfg);
  SpectralOps ops(phi0.grid());
  ScalarField p1 = ops.dealias(phi0);
  ScalarField p2 = p1 + ops.dealias(delta);
  const long long n = step_count(0.0, T, cfg.dt);
  auto theta = [&](const ScalarField& a, const ScalarField& b) {
    ScalarField d = a - b;
    const double m = mean(d);
    for (double& v : d.values()) v -= m;
    const double nd = ops.neumann_dual_norm(d);
    return nd * nd;
  };
  r.theta0 = theta(p1, p2);
  r.min_slack = INFINITY;
  r.min_relative_slack = INFINITY;
  for (long long k = 0; k <= n; ++k) {
    const double t = k * cfg.dt;
    const double th = k == 0 ? r.theta0 : theta(p1, p2);
    const double bound = r.theta0 * std::exp(r.C * t);
    r.samples.push_back({t, th, bound});
    if (k > 0) {
      r.min_slack = std::min(r.min_slack, bound - th);
      if (bound > 0.0) r.min_relative_slack = std::min(r.min_relative_slack, (bound - th) / bound);
    }
    if (k < n) {
      p1 = s1.step(p1);
      p2 = s2.step(p2);
    }
  }
  if (n == 0) r.min_slack = r.min_relative_slack = 0.0;
  r.passed = r.theta0 == 0.0 ? std::all_of(r.samples.begin(), r.samples.end(), [](auto& s) { return s.theta == 0.0; })
                             : r.min_slack > 0.0;
  return r;
}

std::string ContractionReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "C=" << C << "\nC1=" << C1 << "\nC2=" << C2 << "\nc0=" << c0 << "\nu_star=" << u_star
     << "\nkernel_grad_l1=" << kernel_grad_l1 << "\ntheta0=" << theta0 << "\nmin_slack=" << min_slack
     << "\nmin_relative_slack=" << min_relative_slack << "\nsamples=" << samples.size()
     << "\npassed=" << (passed ? "true" : "false") << "\n";
  return os.str();
}

std::string ContractionReport::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << "t,theta,bound\n";
  for (const auto& s : samples) os << s.t << ',' << s.theta << ',' << s.bound << '\n';
  return os.str();
}

}  // namespace nlchns
