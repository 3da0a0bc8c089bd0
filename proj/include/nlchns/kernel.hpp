#pragma once

#include <optional>
#include <string>

#include "nlchns/spectral.hpp"

namespace nlchns {

enum class KernelFamily { PeriodizedGaussian, MollifiedNewtonian };

std::string to_string(KernelFamily f);
KernelFamily kernel_family_from_string(const std::string& s);

struct KernelParams {
  KernelFamily family = KernelFamily::PeriodizedGaussian;
  double width = 0.5;  // Gaussian ε or the newtonian mollifier δ
  double mass = 5.0;
};

class KernelField {
 public:
  static KernelField build(const GridSpec& grid, const KernelParams& params);
  // samples at offsets (ix h, iy h), index 0 being the zero offset
  static KernelField from_samples(const ScalarField& samples);

  const GridSpec& grid() const { return samples_.grid(); }
  const ScalarField& samples() const { return samples_; }
  const Spectrum& spectrum() const { return spectrum_; }
  const ScalarField& a_field() const { return a_field_; }
  double l1_norm() const { return l1_norm_; }
  double grad_l1_norm() const { return grad_l1_norm_; }
  double a_min() const { return a_min_; }
  double a_max() const { return a_max_; }
  double a_mean() const { return a_mean_; }
  const std::optional<KernelParams>& params() const { return params_; }

  // unwrapped kernel J(dx, dy) with the same normalization; needs a parametric kernel
  double free_space(double dx, double dy) const;

 private:
  explicit KernelField(const ScalarField& samples);
  void set_a(double a);

  ScalarField samples_;
  Spectrum spectrum_;
  ScalarField a_field_;
  double l1_norm_ = 0.0, grad_l1_norm_ = 0.0, a_min_ = 0.0, a_max_ = 0.0, a_mean_ = 0.0;
  std::optional<KernelParams> params_;
  double profile_scale_ = 1.0;
};

ScalarField convolve(const KernelField& kernel, const ScalarField& phi);
ScalarField convolve(SpectralOps& ops, const KernelField& kernel, const ScalarField& phi);
// in place: phi_hat <- Ĵ phi_hat
void convolve_spectrum(const KernelField& kernel, Spectrum& phi_hat);

}  // namespace nlchns
