#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nlchns/energetics.hpp"

namespace nlchns {

enum class ChMode { TorusSpectral, BoundedFd };

std::string to_string(ChMode m);
ChMode ch_mode_from_string(const std::string& s);

// Prescribed steady velocity. In bounded mode the samples live on cell faces:
// face_x is (N+1) x N with face ix at x = (ix − ½)h, face_y is N x (N+1) with face iy at y = (iy − ½)h.
struct GivenVelocity {
  ChMode mode = ChMode::TorusSpectral;
  VectorField cells;
  std::vector<double> face_x, face_y;
  double sup_norm = 0.0;
  bool divergence_free = true;

  explicit GivenVelocity(const GridSpec& grid) : cells(grid) {}
  const GridSpec& grid() const { return cells.grid(); }

  static GivenVelocity zero(const GridSpec& grid, ChMode mode);
  // u = (∂ψ/∂y, −∂ψ/∂x); bounded mode pins ψ = 0 on the boundary corners
  static GivenVelocity from_stream_function(const GridSpec& grid, ChMode mode,
                                            const std::function<double(double, double)>& psi);
  static GivenVelocity from_field(const VectorField& u);
  double max_divergence() const;
  GivenVelocity scaled(double s) const;
};

struct ChConfig {
  double dt = 1e-3;
  double s_stab = 8.0;
  double cfl_limit = 0.5;
  void validate(const PotentialSpec& spec) const;
};

struct ChTerms {
  double energy = 0.0;
  double grad_mu_sq = 0.0;
  double advective_power = 0.0;  // (uφ, ∇μ)
  double mass = 0.0;
};

class ChSolver {
 public:
  ChSolver(const KernelField& kernel, const PotentialSpec& spec, const GivenVelocity& vel, const ChConfig& cfg);
  ~ChSolver();
  ChSolver(const ChSolver&) = delete;
  ChSolver& operator=(const ChSolver&) = delete;

  ChMode mode() const { return vel_.mode; }
  const ChConfig& config() const { return cfg_; }
  const GivenVelocity& velocity() const { return vel_; }
  const GridSpec& grid() const { return vel_.grid(); }
  // varying in bounded mode
  const ScalarField& a_field() const;

  ScalarField step(const ScalarField& phi);
  ChTerms terms(const ScalarField& phi);
  ScalarField convolve(const ScalarField& phi);

 private:
  struct Bounded;
  ScalarField step_bounded(const ScalarField& phi);
  ChTerms terms_bounded(const ScalarField& phi);

  KernelField kernel_;
  PotentialSpec spec_;
  GivenVelocity vel_;
  ChConfig cfg_;
  std::unique_ptr<SpectralOps> ops_;
  std::unique_ptr<Bounded> bounded_;
};

ScalarField ch_step(const ScalarField& phi, const GivenVelocity& vel, const ChConfig& cfg, const KernelField& kernel,
                    const PotentialSpec& spec);

// states φ⁰..φⁿ
std::vector<ScalarField> ch_run(ChSolver& solver, const ScalarField& phi0, long long steps);

// rⁿ = Eⁿ⁺¹ − Eⁿ + dt(‖∇μⁿ‖² − (uφⁿ, ∇μⁿ))
ResidualSummary ch_energy_residual(const std::vector<ScalarField>& series, ChSolver& solver);
ResidualSummary ch_energy_residual(const std::vector<ScalarField>& series, const GivenVelocity& vel,
                                   const ChConfig& cfg, const KernelField& kernel, const PotentialSpec& spec);

struct ContractionSample {
  double t, theta, bound;
};

struct ContractionReport {
  double C = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double c0 = 0.0, u_star = 0.0, kernel_grad_l1 = 0.0;
  double theta0 = 0.0;
  double min_slack = 0.0;
  double min_relative_slack = 0.0;
  bool passed = false;
  std::vector<ContractionSample> samples;

  std::string to_key_value() const;
  std::string to_csv() const;
};

// exponent of θ(t) ≤ θ(0)e^{Ct}
double contraction_exponent(double c0, double kernel_grad_l1, double u_star);

ContractionReport uniqueness_contraction_test(const ScalarField& phi0, const ScalarField& delta,
                                              const GivenVelocity& vel, double T, const ChConfig& cfg,
                                              const KernelField& kernel, const PotentialSpec& spec);

}  // namespace nlchns
