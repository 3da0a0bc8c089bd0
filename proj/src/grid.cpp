#include "nlchns/grid.hpp"

#include <algorithm>
#include <sstream>

namespace nlchns {

GridSpec GridSpec::make(double L, int N, double dealias) {
  GridSpec g{L, N, dealias};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw ValidationError("grid: side length must be positive and finite");
  if (resolution < 8 || resolution % 2 != 0)
    throw ValidationError("grid: resolution must be an even integer >= 8, got " + std::to_string(resolution));
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
    throw ValidationError("grid: dealias_fraction must lie in (0, 1]");
}

int GridSpec::dealias_cutoff() const {
  int mc = int(std::floor(dealias_fraction * resolution / 2.0 + 1e-12));
  return std::min(mc, resolution / 2 - 1);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) {
    std::ostringstream os;
    os << where << ": grid mismatch (N=" << a.resolution << ", L=" << a.side_length << " vs N=" << b.resolution
       << ", L=" << b.side_length << ")";
    throw ValidationError(os.str());
  }
}

ScalarField::ScalarField(const GridSpec& grid, double value) : grid_(grid), data_(grid.size(), value) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values) : grid_(grid), data_(std::move(values)) {
  if (data_.size() != grid_.size()) throw ValidationError("field: sample count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy)) {
  require_same_grid(x.grid(), y.grid(), "vector field");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  x += o.x;
  y += o.y;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  x -= o.x;
  y -= o.y;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  x *= s;
  y *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

double integral(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_area();
}

double mean(const ScalarField& f) { return integral(f) / f.grid().area(); }

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().cell_area();
}

double inner(const VectorField& f, const VectorField& g) { return inner(f.x, g.x) + inner(f.y, g.y); }

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const VectorField& f) { return std::sqrt(inner(f, f)); }

double lp_norm(const ScalarField& f, double p) {
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_area(), 1.0 / p);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.x.size(); ++i) m = std::max(m, std::hypot(f.x[i], f.y[i]));
  return m;
}

bool all_finite(const ScalarField& f) {
  for (double v : f.values())
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const VectorField& f) { return all_finite(f.x) && all_finite(f.y); }

}  // namespace nlchns
