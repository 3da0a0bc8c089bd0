#pragma once

#include <vector>

#include "nlchns/fft.hpp"
#include "nlchns/grid.hpp"

namespace nlchns {

// Half-plane spectrum of a real field: rows follow the y modes in FFT order, columns hold x modes 0..N/2.
class Spectrum {
 public:
  explicit Spectrum(const GridSpec& grid) : grid_(grid), data_(grid.spectral_size()) {}

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  Complex& at(int row, int col) { return data_[std::size_t(row) * grid_.spectral_width() + col]; }
  const Complex& at(int row, int col) const { return data_[std::size_t(row) * grid_.spectral_width() + col]; }

 private:
  GridSpec grid_;
  std::vector<Complex> data_;
};

class SpectralOps {
 public:
  explicit SpectralOps(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t spectral_size() const { return k2_.size(); }

  Spectrum forward(const ScalarField& f);
  ScalarField inverse(const Spectrum& s);
  void forward_into(const ScalarField& f, Spectrum& out);
  void inverse_into(const Spectrum& s, ScalarField& out);

  // Laplacian symbol uses the true wavenumbers; first derivatives zero the Nyquist entries.
  double k2(std::size_t i) const { return k2_[i]; }
  double dkx(std::size_t i) const { return dkx_[i]; }
  double dky(std::size_t i) const { return dky_[i]; }
  bool in_band(std::size_t i) const { return band_[i] != 0; }
  // multiplicity of a half-plane entry in the full spectrum
  double weight(std::size_t i) const { return weight_[i]; }

  void truncate(Spectrum& s) const;
  ScalarField dealias(const ScalarField& f);

  VectorField gradient(const ScalarField& f);
  ScalarField divergence(const VectorField& v);
  ScalarField laplacian(const ScalarField& f);
  ScalarField vorticity(const VectorField& v);
  VectorField leray_project(const VectorField& v);
  void leray_project(Spectrum& vx, Spectrum& vy) const;

  // continuum L² pairing of spectral sums: (|Ω|/N⁴) Σ_full mult(k)|f̂|²
  template <class Mult>
  double weighted_norm_sq(const Spectrum& s, Mult&& mult) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += weight_[i] * mult(i) * std::norm(s[i]);
    const double n2 = double(grid_.size());
    return acc * grid_.area() / (n2 * n2);
  }

  double neumann_dual_norm(const ScalarField& f);
  // (1 + |k|²)^{-1/2} multiplier, mean mode weight 1
  double dual_norm(const ScalarField& f);
  double dual_norm(const VectorField& v);
  double gradient_norm_sq(const ScalarField& f);
  double gradient_norm_sq(const VectorField& v);

 private:
  GridSpec grid_;
  RealFft fft_;
  std::vector<double> k2_, dkx_, dky_, weight_;
  std::vector<unsigned char> band_;
};

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField leray_project(const VectorField& v);
double neumann_dual_norm(const ScalarField& f);

}  // namespace nlchns
