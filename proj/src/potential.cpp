#include "nlchns/potential.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace nlchns {

std::string to_string(PotentialFamily f) { return f == PotentialFamily::Quartic ? "quartic" : "polynomial"; }

PotentialFamily potential_family_from_string(const std::string& s) {
  if (s == "quartic") return PotentialFamily::Quartic;
  if (s == "polynomial") return PotentialFamily::Polynomial;
  throw ValidationError("potential: unknown family '" + s + "'");
}

PotentialSpec PotentialSpec::quartic(double alpha, double beta) {
  PotentialSpec p{PotentialFamily::Quartic, {alpha, beta}};
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> ascending) {
  PotentialSpec p{PotentialFamily::Polynomial, std::move(ascending)};
  p.validate();
  return p;
}

void PotentialSpec::validate() const {
  for (double c : coefficients)
    if (!std::isfinite(c)) throw ValidationError("potential: non-finite coefficient");
  if (family == PotentialFamily::Quartic) {
    if (coefficients.size() != 2) throw ValidationError("potential: quartic takes {alpha, beta}");
    if (!(coefficients[0] > 0.0)) throw ValidationError("potential: quartic alpha must be positive");
    if (!(coefficients[1] > 0.0)) throw ValidationError("potential: quartic beta must be positive");
    return;
  }
  const int d = int(coefficients.size()) - 1;
  if (d < 4 || d % 2 != 0) throw ValidationError("potential: polynomial degree must be even and >= 4");
  if (!(coefficients.back() > 0.0)) throw ValidationError("potential: leading coefficient must be positive");
}

std::vector<double> PotentialSpec::expanded() const {
  if (family == PotentialFamily::Polynomial) return coefficients;
  const double a = coefficients[0], b2 = coefficients[1] * coefficients[1];
  return {a * b2 * b2, 0.0, -2.0 * a * b2, 0.0, a};
}

int PotentialSpec::degree() const { return family == PotentialFamily::Quartic ? 4 : int(coefficients.size()) - 1; }

double PotentialSpec::leading() const { return expanded().back(); }

PotentialValue eval_potential(const PotentialSpec& spec, double s) {
  if (spec.family == PotentialFamily::Quartic) {
    const double a = spec.coefficients[0], b2 = spec.coefficients[1] * spec.coefficients[1];
    const double w = s * s - b2;
    return {a * w * w, 4.0 * a * s * w, a * (12.0 * s * s - 4.0 * b2)};
  }
  const auto& c = spec.coefficients;
  double F = 0.0, dF = 0.0, d2F = 0.0;
  for (int i = int(c.size()) - 1; i >= 0; --i) {
    d2F = d2F * s + 2.0 * dF;
    dF = dF * s + F;
    F = F * s + c[i];
  }
  return {F, dF, d2F};
}

double potential_F(const PotentialSpec& spec, double s) { return eval_potential(spec, s).F; }
double potential_dF(const PotentialSpec& spec, double s) { return eval_potential(spec, s).dF; }

double scan_sup(const std::function<double(double)>& r, double lo, double hi, int samples) {
  samples = std::max(samples, 3);
  const double step = (hi - lo) / (samples - 1);
  std::vector<double> v(samples);
  for (int i = 0; i < samples; ++i) v[i] = r(lo + i * step);
  std::vector<int> peaks;
  for (int i = 0; i < samples; ++i) {
    const bool left = i == 0 || v[i] >= v[i - 1];
    const bool right = i == samples - 1 || v[i] >= v[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return v[a] > v[b]; });
  if (peaks.size() > 16) peaks.resize(16);
  double best = *std::max_element(v.begin(), v.end());
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i : peaks) {
    double a = lo + std::max(i - 1, 0) * step, b = lo + std::min(i + 1, samples - 1) * step;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = r(x1), f2 = r(x2);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = r(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = r(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

double potential_scan_radius(const PotentialSpec& spec, double M) {
  const auto c = spec.expanded();
  double ratio = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) ratio = std::max(ratio, std::abs(c[i] / c.back()));
  return std::max(M, 4.0 * (1.0 + ratio));
}

double potential_inf(const PotentialSpec& spec) {
  if (spec.family == PotentialFamily::Quartic) return 0.0;
  const double R = potential_scan_radius(spec, 1.0);
  return -scan_sup([&](double s) { return -potential_F(spec, s); }, -R, R);
}

double curvature_inf(const PotentialSpec& spec) {
  if (spec.family == PotentialFamily::Quartic) {
    const double b = spec.coefficients[1];
    return -4.0 * spec.coefficients[0] * b * b;
  }
  const double R = potential_scan_radius(spec, 1.0);
  return -scan_sup([&](double s) { return -eval_potential(spec, s).d2F; }, -R, R);
}

namespace {

// keep reported sup-type constants on the safe side of the numerical maximum
double inflate(double v) { return v + 1e-9 * (1.0 + std::abs(v)); }

double slack_tolerance(double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

AssumptionReport verify_assumptions(const PotentialSpec& spec, const KernelField& kernel, double M, int samples) {
  spec.validate();
  if (!(M >= 3.0)) throw ValidationError("verify_assumptions: sample bound M must be >= 3");
  if (samples < 2) throw ValidationError("verify_assumptions: need at least two samples");

  AssumptionReport r;
  r.M = M;
  r.samples = samples;
  r.kernel_l1 = kernel.l1_norm();
  r.a_min = kernel.a_min();
  r.kernel_sign = r.a_min >= 0.0;

  const int d = spec.degree();
  const double lead = spec.leading();
  r.p_prime = d;
  r.p = spec.conjugate_exponent();
  r.q = spec.nonlocal_exponent();
  r.c1 = 0.5 * r.kernel_l1 + 0.5;
  r.c3 = 2.0 * std::pow(d * lead, r.p) / lead;

  const double R = potential_scan_radius(spec, M);
  auto F = [&](double s) { return potential_F(spec, s); };
  auto powq = [&](double s) { return std::pow(std::abs(s), 2.0 * r.q); };

  if (spec.family == PotentialFamily::Quartic) {
    const double a = spec.coefficients[0], b2 = spec.coefficients[1] * spec.coefficients[1];
    r.c0 = -4.0 * a * b2 + r.a_min;
    r.c7 = 12.0 * a;
    r.c8_required = 4.0 * a * b2 - r.a_min;
    r.C9 = 0.5 * a;
    r.C10 = a * b2 * b2;
    r.c2 = r.c1 * b2 + r.c1 * r.c1 / (4.0 * a);
    r.c5 = a;
    r.c6 = a * b2 * b2;
  } else {
    r.c0 = curvature_inf(spec) + r.a_min;
    r.c7 = 0.5 * d * (d - 1) * lead;
    r.c8_required =
        inflate(scan_sup([&](double s) { return r.c7 * powq(s) - eval_potential(spec, s).d2F - r.a_min; }, -R, R));
    r.C9 = 0.5 * lead;
    r.C10 = inflate(scan_sup([&](double s) { return r.C9 * std::pow(std::abs(s), d) - F(s); }, -R, R));
    r.c2 = inflate(scan_sup([&](double s) { return r.c1 * s * s - F(s); }, -R, R));
    r.c5 = 2.0 * lead;
    r.c6 = inflate(scan_sup([&](double s) { return std::abs(F(s)) - r.c5 * std::pow(std::abs(s), d); }, -R, R));
  }
  r.c8 = std::max(r.c8_required, 1.0);
  r.c4 = inflate(scan_sup(
      [&](double s) { return std::pow(std::abs(potential_dF(spec, s)), r.p) - r.c3 * std::abs(F(s)); }, -R, R));
  r.c4 = std::max(r.c4, 0.0);

  double s3 = INFINITY, s4 = INFINITY, s5 = INFINITY, s6 = INFINITY, sl = INFINITY, sg = INFINITY;
  bool ok3 = true, ok4 = true, ok5 = true, ok6 = true, okl = true, okg = true;
  auto record = [](double lhs, double rhs, double& slack, bool& ok) {
    const double sl = rhs - lhs;
    slack = std::min(slack, sl);
    if (sl < -slack_tolerance(lhs, rhs)) ok = false;
  };
  for (int i = 0; i < samples; ++i) {
    const double s = -M + 2.0 * M * i / (samples - 1);
    const PotentialValue v = eval_potential(spec, s);
    const double sp = std::pow(std::abs(s), 2.0 + 2.0 * r.q);
    record(r.c0, v.d2F + r.a_min, s3, ok3);
    record(r.c1 * s * s - r.c2, v.F, s4, ok4);
    record(std::pow(std::abs(v.dF), r.p), r.c3 * std::abs(v.F) + r.c4, s5, ok5);
    record(r.c7 * powq(s) - r.c8, v.d2F + r.a_min, s6, ok6);
    record(r.C9 * sp - r.C10, v.F, sl, okl);
    record(std::abs(v.F), r.c5 * std::pow(std::abs(s), r.p_prime) + r.c6, sg, okg);
  }
  r.slack_convexity = s3;
  r.slack_coercivity = s4;
  r.slack_derivative = s5;
  r.slack_curvature = s6;
  r.slack_lower = sl;
  r.slack_growth = sg;
  r.convexity = ok3 && r.c0 > 0.0;
  r.coercivity = ok4 && r.c1 > 0.5 * r.kernel_l1;
  r.derivative_bound = ok5 && r.p > 1.0 && r.p <= 2.0;
  r.curvature_bound = ok6 && r.c8 > 0.0;
  r.lower_bound = okl;
  r.growth = okg;
  return r;
}

std::string AssumptionReport::to_key_value() const {
  std::ostringstream os;
  os << std::setprecision(17);
  auto flag = [](bool b) { return b ? "pass" : "fail"; };
  os << "c0=" << c0 << "\nc1=" << c1 << "\nc2=" << c2 << "\nc3=" << c3 << "\nc4=" << c4 << "\nc5=" << c5
     << "\nc6=" << c6 << "\nc7=" << c7 << "\nc8=" << c8 << "\nc8_required=" << c8_required << "\nq=" << q
     << "\np=" << p << "\np_prime=" << p_prime << "\nC9=" << C9 << "\nC10=" << C10 << "\nsample_bound=" << M
     << "\nsamples=" << samples << "\nkernel_l1=" << kernel_l1 << "\na_min=" << a_min << "\nkernel_sign=" << flag(kernel_sign)
     << "\nconvexity=" << flag(convexity) << "\ncoercivity=" << flag(coercivity) << "\nderivative_bound=" << flag(derivative_bound) << "\ncurvature_bound=" << flag(curvature_bound)
     << "\nlower_bound=" << flag(lower_bound) << "\ngrowth=" << flag(growth) << "\nslack_convexity=" << slack_convexity
     << "\nslack_coercivity=" << slack_coercivity << "\nslack_derivative=" << slack_derivative << "\nslack_curvature=" << slack_curvature
     << "\nslack_lower_bound=" << slack_lower << "\nslack_growth=" << slack_growth
     << "\nall_passed=" << (passed() ? "true" : "false") << "\n";
  return os.str();
}

ConvexSplit convex_split(const PotentialSpec& spec, const KernelField& kernel, double c0, double s, int ix, int iy) {
  const double a = kernel.a_field().at(ix, iy);
  const PotentialValue v = eval_potential(spec, s);
  return {v.F + (a - 0.5 * c0) * s * s / 2.0, v.F + a * s * s / 2.0, v.d2F + a - 0.5 * c0, v.d2F + a};
}

}  // namespace nlchns
