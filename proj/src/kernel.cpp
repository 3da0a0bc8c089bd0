#include "nlchns/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlchns {

namespace {

double gaussian_profile(double r2, double eps) { return std::exp(-r2 / (2.0 * eps * eps)); }

double newtonian_profile(double r2, double delta, double cutoff) {
  const double r = std::sqrt(r2);
  if (r >= cutoff) return 0.0;
  const double w = 1.0 - r2 / (cutoff * cutoff);
  return w * w / std::sqrt(r2 + delta * delta);
}

double newtonian_cutoff(const GridSpec& g) { return 0.45 * g.side_length; }

double profile(const KernelParams& p, const GridSpec& g, double dx, double dy) {
  const double r2 = dx * dx + dy * dy;
  if (p.family == KernelFamily::PeriodizedGaussian) return gaussian_profile(r2, p.width);
  return newtonian_profile(r2, p.width, newtonian_cutoff(g));
}

}  // namespace

std::string to_string(KernelFamily f) {
  return f == KernelFamily::PeriodizedGaussian ? "periodized-gaussian" : "mollified-newtonian";
}

KernelFamily kernel_family_from_string(const std::string& s) {
  if (s == "periodized-gaussian") return KernelFamily::PeriodizedGaussian;
  if (s == "mollified-newtonian") return KernelFamily::MollifiedNewtonian;
  throw ValidationError("kernel: unknown family '" + s + "'");
}

KernelField::KernelField(const ScalarField& samples)
    : samples_(samples), spectrum_(samples.grid()), a_field_(samples.grid()) {
  const GridSpec& g = samples.grid();
  SpectralOps ops(g);
  ops.forward_into(samples_, spectrum_);
  const double dA = g.cell_area();
  double smax = 0.0;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    spectrum_[i] *= dA;
    smax = std::max(smax, std::abs(spectrum_[i]));
  }
  for (std::size_t i = 0; i < spectrum_.size(); ++i)
    if (std::abs(spectrum_[i].imag()) > 1e-12 * smax)
      throw ValidationError("kernel: samples are not even (J(x) != J(-x))");

  // a = J∗1 is the constant zero mode on the torus
  set_a(spectrum_[0].real());
  if (a_min_ < 0.0) throw ValidationError("kernel: a(x) is negative");

  double l1 = 0.0;
  for (double v : samples_.values()) l1 += std::abs(v);
  l1_norm_ = l1 * dA;
  const VectorField gJ = ops.gradient(samples_);
  double gl1 = 0.0;
  for (std::size_t i = 0; i < gJ.x.size(); ++i) gl1 += std::hypot(gJ.x[i], gJ.y[i]);
  grad_l1_norm_ = gl1 * dA;
}

KernelField KernelField::build(const GridSpec& grid, const KernelParams& p) {
  grid.validate();
  const double L = grid.side_length;
  const int N = grid.resolution;
  const double h = grid.spacing();
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw ValidationError("kernel: mass must be positive");
  if (!(p.width > 0.0) || !std::isfinite(p.width)) throw ValidationError("kernel: width must be positive");
  if (p.width < 2.0 * L / N) {
    std::ostringstream os;
    os << "kernel: resolution too coarse for width " << p.width << " (need width >= 2L/N = " << 2.0 * L / N
       << ")";
    throw ValidationError(os.str());
  }
  if (p.width > L / 4.0) {
    std::ostringstream os;
    os << "kernel: width " << p.width << " exceeds L/4 = " << L / 4.0;
    throw ValidationError(os.str());
  }

  ScalarField s(grid);
  for (int iy = 0; iy < N; ++iy) {
    const double dy = grid.mode(iy) * h;
    for (int ix = 0; ix < N; ++ix) {
      const double dx = grid.mode(ix) * h;
      double v = 0.0;
      if (p.family == KernelFamily::PeriodizedGaussian) {
        for (int ny = -2; ny <= 2; ++ny)
          for (int nx = -2; nx <= 2; ++nx) v += profile(p, grid, dx + nx * L, dy + ny * L);
      } else {
        v = profile(p, grid, dx, dy);
      }
      s.at(ix, iy) = v;
    }
  }
  const double raw = integral(s);
  const double scale = p.mass / raw;
  s *= scale;
  KernelField k(s);
  if (std::abs(k.a_min_ - p.mass) <= 1e-12 * p.mass) k.set_a(p.mass);
  k.params_ = p;
  k.profile_scale_ = scale;
  return k;
}

void KernelField::set_a(double a) {
  a_field_ = ScalarField(grid(), a);
  a_min_ = a_max_ = a_mean_ = a;
}

KernelField KernelField::from_samples(const ScalarField& samples) {
  if (!all_finite(samples)) throw ValidationError("kernel: non-finite samples");
  return KernelField(samples);
}

double KernelField::free_space(double dx, double dy) const {
  if (!params_) throw ValidationError("kernel: free-space evaluation needs a parametric kernel");
  return profile_scale_ * profile(*params_, grid(), dx, dy);
}

void convolve_spectrum(const KernelField& kernel, Spectrum& phi_hat) {
  require_same_grid(kernel.grid(), phi_hat.grid(), "convolve");
  const Spectrum& J = kernel.spectrum();
  for (std::size_t i = 0; i < phi_hat.size(); ++i) phi_hat[i] *= J[i];
}

ScalarField convolve(SpectralOps& ops, const KernelField& kernel, const ScalarField& phi) {
  require_same_grid(kernel.grid(), phi.grid(), "convolve");
  Spectrum s = ops.forward(phi);
  convolve_spectrum(kernel, s);
  return ops.inverse(s);
}

ScalarField convolve(const KernelField& kernel, const ScalarField& phi) {
  require_same_grid(kernel.grid(), phi.grid(), "convolve");
  SpectralOps ops(phi.grid());
  return convolve(ops, kernel, phi);
}

}  // namespace nlchns
