#include "nlchns/spectral.hpp"

#include <algorithm>
#include <sstream>

namespace nlchns {

SpectralOps::SpectralOps(const GridSpec& grid) : grid_(grid), fft_(grid.resolution, grid.resolution) {
  grid_.validate();
  const int N = grid_.resolution;
  const int W = grid_.spectral_width();
  const double k0 = grid_.fundamental();
  const int mc = grid_.dealias_cutoff();
  const std::size_t n = grid_.spectral_size();
  k2_.resize(n);
  dkx_.resize(n);
  dky_.resize(n);
  weight_.resize(n);
  band_.resize(n);
  for (int r = 0; r < N; ++r) {
    const int my = grid_.mode(r);
    for (int c = 0; c < W; ++c) {
      const std::size_t i = std::size_t(r) * W + c;
      const double kx = k0 * c;
      const double ky = k0 * my;
      k2_[i] = kx * kx + ky * ky;
      dkx_[i] = (c == N / 2) ? 0.0 : kx;
      dky_[i] = (r == N / 2) ? 0.0 : ky;
      weight_[i] = (c == 0 || c == N / 2) ? 1.0 : 2.0;
      band_[i] = (c <= mc && std::abs(my) <= mc) ? 1 : 0;
    }
  }
}

Spectrum SpectralOps::forward(const ScalarField& f) {
  Spectrum s(grid_);
  forward_into(f, s);
  return s;
}

ScalarField SpectralOps::inverse(const Spectrum& s) {
  ScalarField f(grid_);
  inverse_into(s, f);
  return f;
}

void SpectralOps::forward_into(const ScalarField& f, Spectrum& out) {
  require_same_grid(grid_, f.grid(), "spectral forward");
  fft_.forward(f.data(), out.data());
}

void SpectralOps::inverse_into(const Spectrum& s, ScalarField& out) {
  require_same_grid(grid_, s.grid(), "spectral inverse");
  fft_.inverse(s.data(), out.data());
}

void SpectralOps::truncate(Spectrum& s) const {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!band_[i]) s[i] = 0.0;
}

ScalarField SpectralOps::dealias(const ScalarField& f) {
  Spectrum s = forward(f);
  truncate(s);
  return inverse(s);
}

VectorField SpectralOps::gradient(const ScalarField& f) {
  const Spectrum s = forward(f);
  Spectrum gx(grid_), gy(grid_);
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    gx[i] = I * dkx_[i] * s[i];
    gy[i] = I * dky_[i] * s[i];
  }
  return VectorField(inverse(gx), inverse(gy));
}

ScalarField SpectralOps::divergence(const VectorField& v) {
  const Spectrum sx = forward(v.x);
  const Spectrum sy = forward(v.y);
  Spectrum d(grid_);
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = I * (dkx_[i] * sx[i] + dky_[i] * sy[i]);
  return inverse(d);
}

ScalarField SpectralOps::laplacian(const ScalarField& f) {
  Spectrum s = forward(f);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -k2_[i];
  return inverse(s);
}

ScalarField SpectralOps::vorticity(const VectorField& v) {
  const Spectrum sx = forward(v.x);
  const Spectrum sy = forward(v.y);
  Spectrum w(grid_);
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = I * (dkx_[i] * sy[i] - dky_[i] * sx[i]);
  return inverse(w);
}

void SpectralOps::leray_project(Spectrum& vx, Spectrum& vy) const {
  for (std::size_t i = 0; i < vx.size(); ++i) {
    const double d2 = dkx_[i] * dkx_[i] + dky_[i] * dky_[i];
    if (d2 == 0.0) continue;
    const Complex p = (dkx_[i] * vx[i] + dky_[i] * vy[i]) / d2;
    vx[i] -= dkx_[i] * p;
    vy[i] -= dky_[i] * p;
  }
}

VectorField SpectralOps::leray_project(const VectorField& v) {
  Spectrum sx = forward(v.x);
  Spectrum sy = forward(v.y);
  leray_project(sx, sy);
  return VectorField(inverse(sx), inverse(sy));
}

double SpectralOps::neumann_dual_norm(const ScalarField& f) {
  require_same_grid(grid_, f.grid(), "neumann_dual_norm");
  const double scale = max_abs(f);
  if (scale == 0.0) return 0.0;
  const double total = integral(f);
  if (std::abs(total) > 1e-10 * grid_.area() * scale) {
    std::ostringstream os;
    os << "neumann_dual_norm: field mean must vanish, (phi,1) = " << total;
    throw ValidationError(os.str());
  }
  const Spectrum s = forward(f);
  return std::sqrt(weighted_norm_sq(s, [&](std::size_t i) { return k2_[i] > 0.0 ? 1.0 / k2_[i] : 0.0; }));
}

double SpectralOps::dual_norm(const ScalarField& f) {
  const Spectrum s = forward(f);
  return std::sqrt(weighted_norm_sq(s, [&](std::size_t i) { return 1.0 / (1.0 + k2_[i]); }));
}

double SpectralOps::dual_norm(const VectorField& v) {
  const double a = dual_norm(v.x);
  const double b = dual_norm(v.y);
  return std::sqrt(a * a + b * b);
}

double SpectralOps::gradient_norm_sq(const ScalarField& f) {
  const Spectrum s = forward(f);
  return weighted_norm_sq(s, [&](std::size_t i) { return dkx_[i] * dkx_[i] + dky_[i] * dky_[i]; });
}

double SpectralOps::gradient_norm_sq(const VectorField& v) { return gradient_norm_sq(v.x) + gradient_norm_sq(v.y); }

VectorField gradient(const ScalarField& f) { return SpectralOps(f.grid()).gradient(f); }
ScalarField divergence(const VectorField& v) { return SpectralOps(v.grid()).divergence(v); }
ScalarField laplacian(const ScalarField& f) { return SpectralOps(f.grid()).laplacian(f); }
VectorField leray_project(const VectorField& v) { return SpectralOps(v.grid()).leray_project(v); }
double neumann_dual_norm(const ScalarField& f) { return SpectralOps(f.grid()).neumann_dual_norm(f); }

}  // namespace nlchns
