#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlchns {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double side_length = 2.0 * std::numbers::pi;
  int resolution = 64;
  double dealias_fraction = 2.0 / 3.0;

  static GridSpec make(double L, int N, double dealias = 2.0 / 3.0);
  void validate() const;

  double spacing() const { return side_length / resolution; }
  double cell_area() const { return spacing() * spacing(); }
  double area() const { return side_length * side_length; }
  std::size_t size() const { return std::size_t(resolution) * std::size_t(resolution); }
  int spectral_width() const { return resolution / 2 + 1; }
  std::size_t spectral_size() const { return std::size_t(resolution) * std::size_t(spectral_width()); }
  // smallest nonzero wavenumber 2π/L
  double fundamental() const { return 2.0 * std::numbers::pi / side_length; }
  int dealias_cutoff() const;
  // signed integer mode for an index along a full axis
  int mode(int index) const { return index < resolution / 2 ? index : index - resolution; }

  bool operator==(const GridSpec&) const = default;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

class ScalarField {
 public:
  explicit ScalarField(const GridSpec& grid, double value = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const GridSpec& grid, F&& f) {
    ScalarField out(grid);
    const int N = grid.resolution;
    const double h = grid.spacing();
    for (int iy = 0; iy < N; ++iy)
      for (int ix = 0; ix < N; ++ix) out.at(ix, iy) = f(ix * h, iy * h);
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& vector() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(int ix, int iy) { return data_[std::size_t(iy) * grid_.resolution + ix]; }
  double at(int ix, int iy) const { return data_[std::size_t(iy) * grid_.resolution + ix]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  bool operator==(const ScalarField& o) const { return grid_ == o.grid_ && data_ == o.data_; }

 private:
  GridSpec grid_;
  std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

struct VectorField {
  ScalarField x;
  ScalarField y;

  explicit VectorField(const GridSpec& grid) : x(grid), y(grid) {}
  VectorField(ScalarField fx, ScalarField fy);

  const GridSpec& grid() const { return x.grid(); }
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  bool operator==(const VectorField& o) const { return x == o.x && y == o.y; }
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

// grid quadratures (sum times cell area)
double integral(const ScalarField& f);
double mean(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& f, const VectorField& g);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);
double lp_norm(const ScalarField& f, double p);
double max_abs(const ScalarField& f);
double max_abs(const VectorField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace nlchns
