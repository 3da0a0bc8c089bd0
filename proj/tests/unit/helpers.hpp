#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "nlchns/grid.hpp"

namespace testing {

using nlchns::GridSpec;
using nlchns::ScalarField;
using nlchns::VectorField;

inline GridSpec grid(int N, double L = 2.0 * std::numbers::pi) { return GridSpec::make(L, N); }

// trigonometric sum with integer modes |m| ≤ band, evaluated directly at the nodes
inline ScalarField trig_field(const GridSpec& g, std::uint64_t seed, int band, bool with_mean = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField f(g);
  const double k = g.fundamental();
  for (int mx = 0; mx <= band; ++mx)
    for (int my = -band; my <= band; ++my) {
      if (mx == 0 && my < 0) continue;
      if (mx == 0 && my == 0 && !with_mean) continue;
      const double a = U(rng), b = U(rng);
      for (int iy = 0; iy < g.resolution; ++iy)
        for (int ix = 0; ix < g.resolution; ++ix) {
          const double th = k * (mx * ix + my * iy) * g.spacing();
          f.at(ix, iy) += a * std::cos(th) + (mx == 0 && my == 0 ? 0.0 : b * std::sin(th));
        }
    }
  return f;
}

// u = (∂yψ, −∂xψ) of a random trigonometric ψ, differentiated analytically
inline VectorField solenoidal_field(const GridSpec& g, std::uint64_t seed, int band) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  VectorField u(g);
  const double k = g.fundamental();
  for (int mx = 0; mx <= band; ++mx)
    for (int my = -band; my <= band; ++my) {
      if (mx == 0 && my <= 0) continue;
      const double a = U(rng), b = U(rng);
      for (int iy = 0; iy < g.resolution; ++iy)
        for (int ix = 0; ix < g.resolution; ++ix) {
          const double th = k * (mx * ix + my * iy) * g.spacing();
          const double d = -a * std::sin(th) + b * std::cos(th);
          u.x.at(ix, iy) += k * my * d;
          u.y.at(ix, iy) -= k * mx * d;
        }
    }
  return u;
}

inline double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
  return std::max(max_diff(a.x, b.x), max_diff(a.y, b.y));
}

}  // namespace testing
