#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlchns/kernel.hpp"

namespace nlchns {

enum class PotentialFamily { Quartic, Polynomial };

std::string to_string(PotentialFamily f);
PotentialFamily potential_family_from_string(const std::string& s);

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::Quartic;
  // quartic: {alpha, beta} for alpha (s² - beta²)²; polynomial: ascending coefficients
  std::vector<double> coefficients{1.0, 1.0};

  static PotentialSpec quartic(double alpha = 1.0, double beta = 1.0);
  static PotentialSpec polynomial(std::vector<double> ascending);

  void validate() const;
  std::vector<double> expanded() const;
  int degree() const;
  double leading() const;
  double growth_order() const { return degree(); }  // p'
  double conjugate_exponent() const { return growth_order() / (growth_order() - 1.0); }  // p
  double nonlocal_exponent() const { return 0.5 * (degree() - 2); }  // q
};

struct PotentialValue {
  double F, dF, d2F;
};

PotentialValue eval_potential(const PotentialSpec& spec, double s);
double potential_F(const PotentialSpec& spec, double s);
double potential_dF(const PotentialSpec& spec, double s);

// sup of r on [lo, hi] by a dense scan with golden refinement of each local maximum
double scan_sup(const std::function<double(double)>& r, double lo, double hi, int samples = 200000);
// half-width of an interval that contains every critical point of the potential's residuals
double potential_scan_radius(const PotentialSpec& spec, double M);

double potential_inf(const PotentialSpec& spec);
double curvature_inf(const PotentialSpec& spec);

struct AssumptionReport {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0, c8 = 0, c8_required = 0;
  double q = 0, p = 0, p_prime = 0, C9 = 0, C10 = 0;
  double M = 0;
  int samples = 0;
  double kernel_l1 = 0, a_min = 0;
  bool kernel_sign = false, convexity = false, coercivity = false, derivative_bound = false, curvature_bound = false;
  bool lower_bound = false, growth = false;
  double slack_convexity = 0, slack_coercivity = 0, slack_derivative = 0, slack_curvature = 0;
  double slack_lower = 0, slack_growth = 0;

  bool passed() const {
    return kernel_sign && convexity && coercivity && derivative_bound && curvature_bound && lower_bound && growth;
  }
  std::string to_key_value() const;
};

AssumptionReport verify_assumptions(const PotentialSpec& spec, const KernelField& kernel, double M = 5.0,
                                    int samples = 10000);

struct ConvexSplit {
  double G, G_tilde;
  double d2G, d2G_tilde;
};

ConvexSplit convex_split(const PotentialSpec& spec, const KernelField& kernel, double c0, double s, int ix, int iy);

}  // namespace nlchns
