#include "beltrami/families.hpp"

#include <cmath>

namespace beltrami {

namespace {
double ramp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double ramp_prime(double x) {
  if (x <= 0.0) return 0.0;
  double e = std::exp(-1.0 / x);
  return e / (x * x);
}
} // namespace

double falloff(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  double a = ramp(1.0 - t);
  double b = ramp(t);
  return a / (a + b);
}

double falloff_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double a = ramp(1.0 - t);
  double b = ramp(t);
  double ap = -ramp_prime(1.0 - t);
  double bp = ramp_prime(t);
  double denom = a + b;
  return (ap * denom - a * (ap + bp)) / (denom * denom);
}

cdouble BumpSpec::operator()(cdouble z) const {
  double r = std::abs(z - center);
  double cut = falloff((r - cut_start) / (cut_end - cut_start));
  if (cut == 0.0) return 0.0;
  double re = std::norm(z - center);
  return amplitude * std::exp(-re / (width * width)) * cut;
}

ComplexField sample_bump(const GridSpec& grid, const BumpSpec& bump) {
  return sample_function(grid, [&bump](cdouble z) { return bump(z); });
}

StandardFamily standard_family(int n) {
  StandardFamily fam{
      GridSpec::make(n, 0.0, 4.0),
      BumpSpec{cdouble(-0.5, 0.0), cdouble(0.4, 0.0), 1.0, 1.0, 1.45},
      BumpSpec{cdouble(0.0, 0.5), cdouble(0.5, 0.0), 1.0, 1.0, 1.45},
  };
  return fam;
}

cdouble OracleDiffeo::value(cdouble z) const {
  double e = std::exp(-std::norm(z));
  return (z + c * e * std::conj(z)) / (1.0 + c * std::exp(-1.0));
}

cdouble OracleDiffeo::dz(cdouble z) const {
  double e = std::exp(-std::norm(z));
  cdouble zb = std::conj(z);
  return (1.0 - c * zb * zb * e) / (1.0 + c * std::exp(-1.0));
}

cdouble OracleDiffeo::dzbar(cdouble z) const {
  double e = std::exp(-std::norm(z));
  return c * e * (1.0 - std::norm(z)) / (1.0 + c * std::exp(-1.0));
}

cdouble OracleDiffeo::mu(cdouble z) const {
  double e = std::exp(-std::norm(z));
  cdouble zb = std::conj(z);
  return c * e * (1.0 - std::norm(z)) / (1.0 - c * zb * zb * e);
}

cdouble OracleDiffeo::mu_truncated(cdouble z) const {
  double cut = falloff((std::abs(z) - 3.85) / 0.7);
  return cut == 0.0 ? cdouble(0.0) : mu(z) * cut;
}

ComplexField make_mean_free(const ComplexField& u) {
  const GridSpec& spec = u.spec();
  double hw = spec.half_width;
  BumpSpec psi{spec.center + hw * cdouble(0.075, 0.05), cdouble(1.0, 0.0), 0.1 * hw,
               0.12 * hw, 0.17 * hw};
  ComplexField psif = sample_bump(spec, psi);
  cdouble su = 0.0, sp = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u.data()[i];
    sp += psif.data()[i];
  }
  ComplexField out = u;
  out.add_scaled(psif, -su / sp);
  return out;
}

double BumpSampler::uniform(double lo, double hi) {
  double x = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + x * (hi - lo);
}

BumpSpec BumpSampler::next(const GridSpec& grid) {
  double hw = grid.half_width;
  cdouble center = grid.center + cdouble(uniform(-0.2, 0.2), uniform(-0.2, 0.2)) * hw;
  double width = uniform(0.075, 0.125) * hw;
  double phase = uniform(0.0, 2.0 * M_PI);
  double mod = uniform(0.5, 1.5);
  return BumpSpec{center, mod * cdouble(std::cos(phase), std::sin(phase)), width,
                  1.2 * width, 1.7 * width};
}

} // namespace beltrami
