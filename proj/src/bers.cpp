#include "beltrami/bers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "beltrami/errors.hpp"

namespace beltrami {

namespace {

std::string fmt_node(const GridSpec& spec, int i, int j) {
  cdouble z = spec.node(i, j);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "node (%d,%d) = %.6g%+.6gi", i, j, z.real(), z.imag());
  return buf;
}

/// Every sampled |value| > 1e-13 must sit at Im >= 2 spacing (sign = +1) or
/// Im <= -2 spacing (sign = -1), measured from the real axis.
void require_half_plane(const ComplexField& field, int sign, const char* what) {
  const GridSpec& spec = field.spec();
  double h = spec.spacing();
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      if (std::abs(field.at(i, j)) <= 1e-13) continue;
      double im = spec.node(i, j).imag();
      if (sign * im < 2.0 * h - 1e-12) {
        throw config_error(std::string(what) +
                           ": support must keep distance >= 2 spacing from the real axis, "
                           "violated at " +
                           fmt_node(spec, i, j));
      }
    }
  }
}

} // namespace

GluedCoefficient GluedCoefficient::make(BeltramiCoefficient mu1, BeltramiCoefficient mu2) {
  const GridSpec& spec = mu1.grid();
  if (!(mu2.grid() == spec)) throw invariant_error("glue: coefficient grids differ");
  if (std::abs(spec.center.imag()) > 1e-12) {
    throw config_error("glue: grid center must lie on the real axis");
  }
  require_half_plane(mu1.field(), +1, "glue: mu1");
  require_half_plane(mu2.field(), -1, "glue: mu2");

  ComplexField glued = ComplexField::zeros(spec);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      double im = spec.node(i, j).imag();
      if (std::abs(im) < spec.spacing()) continue;
      glued.at(i, j) = im > 0.0 ? mu1.field().at(i, j) : mu2.field().at(i, j);
    }
  }
  auto coefficient = BeltramiCoefficient::from_field(std::move(glued));
  return GluedCoefficient{std::move(mu1), std::move(mu2), std::move(coefficient)};
}

ComplexField reflect_conjugate(const ComplexField& in) {
  const GridSpec& spec = in.spec();
  ComplexField out = ComplexField::zeros(spec);
  for (int i = 0; i < spec.n; ++i) {
    // j = 0 has no mirror row (n - j falls off the grid); it stays zero.
    for (int j = 1; j < spec.n; ++j) {
      out.at(i, j) = std::conj(in.at(i, spec.n - j));
    }
  }
  return out;
}

UniformizationResult simultaneous_uniformize(const GluedCoefficient& glued, double tol,
                                             int max_iter,
                                             std::shared_ptr<const TransformPlan> plan) {
  SolveReport solve = canonical_solution(glued.glued, tol, max_iter, std::move(plan));
  require_converged(solve, "simultaneous_uniformize");

  const GridSpec& spec = glued.glued.grid();
  const int n = spec.n;
  const ComplexField& f = solve.solution.values();
  ComplexField dz = solve.solution.derivative(1, 0);
  ComplexField dzbar = solve.solution.derivative(0, 1);

  UniformizationResult out{std::move(solve),
                           ComplexField::zeros(spec), ComplexField::zeros(spec),
                           ComplexField::zeros(spec), ComplexField::zeros(spec),
                           ComplexField::zeros(spec), ComplexField::zeros(spec),
                           0.0};
  for (int i = 0; i < n; ++i) {
    for (int j = n / 2; j < n; ++j) {
      int jr = n - j; // conjugate node's row; j = n/2 maps to itself
      out.f1.at(i, j) = f.at(i, j);
      out.f1_dz.at(i, j) = dz.at(i, j);
      out.f1_dzbar.at(i, j) = dzbar.at(i, j);
      out.f2bar.at(i, j) = f.at(i, jr);
      out.f2bar_dz.at(i, j) = dzbar.at(i, jr);
      out.f2bar_dzbar.at(i, j) = dz.at(i, jr);
    }
  }

  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = n / 2; j < n; ++j) {
      if (spec.node(i, j).imag() < 0.5 - 1e-12) continue;
      min_sep = std::min(min_sep, std::abs(out.f1.at(i, j) - out.f2bar.at(i, j)));
    }
  }
  out.min_separation = std::isfinite(min_sep) ? min_sep : 0.0;
  return out;
}

MetricComponents bers_metric(const ComplexField& f1, const ComplexField& f1_dz,
                             const ComplexField& f1_dzbar, const ComplexField& f2bar,
                             const ComplexField& f2bar_dz, const ComplexField& f2bar_dzbar) {
  const GridSpec& spec = f1.spec();
  for (const ComplexField* field : {&f1_dz, &f1_dzbar, &f2bar, &f2bar_dz, &f2bar_dzbar}) {
    if (!(field->spec() == spec)) throw invariant_error("bers_metric: field grids differ");
  }

  MetricComponents out{ComplexField::zeros(spec), ComplexField::zeros(spec),
                       ComplexField::zeros(spec)};
  for (int i = 0; i < spec.n; ++i) {
    for (int j = spec.n / 2 + 1; j < spec.n; ++j) {
      cdouble d = f1.at(i, j) - f2bar.at(i, j);
      if (std::abs(d) < 1e-8) {
        throw invariant_error("bers_metric: image discs collide (|f1 - f2bar| < 1e-8) at " +
                              fmt_node(spec, i, j));
      }
      cdouble lambda = -4.0 / (d * d);
      out.g_zz.at(i, j) = lambda * f1_dz.at(i, j) * f2bar_dz.at(i, j);
      out.g_zbzb.at(i, j) = lambda * f1_dzbar.at(i, j) * f2bar_dzbar.at(i, j);
      out.g_zzbar.at(i, j) = lambda * 0.5 *
                             (f1_dz.at(i, j) * f2bar_dzbar.at(i, j) +
                              f1_dzbar.at(i, j) * f2bar_dz.at(i, j));
    }
  }
  return out;
}

MetricComponents bers_metric(const UniformizationResult& maps) {
  return bers_metric(maps.f1, maps.f1_dz, maps.f1_dzbar, maps.f2bar, maps.f2bar_dz,
                     maps.f2bar_dzbar);
}

double hyperbolic_defect(const MetricComponents& metric, const DiskRegion& region) {
  const GridSpec& spec = metric.g_zz.spec();
  if (!(metric.g_zzbar.spec() == spec) || !(metric.g_zbzb.spec() == spec)) {
    throw invariant_error("hyperbolic_defect: component grids differ");
  }
  if (region.center.imag() - region.radius < 0.5 - 1e-9) {
    throw config_error("hyperbolic_defect: region must lie in Im z >= 0.5");
  }
  if (std::abs(region.center.real() - spec.center.real()) + region.radius >
          spec.half_width + 1e-12 ||
      std::abs(region.center.imag() - spec.center.imag()) + region.radius >
          spec.half_width + 1e-12) {
    throw config_error("hyperbolic_defect: region must lie inside the grid square");
  }

  double h2 = spec.spacing() * spec.spacing();
  double total = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = spec.n / 2 + 1; j < spec.n; ++j) {
      cdouble z = spec.node(i, j);
      if (!region.contains(z)) continue;
      double y = z.imag();
      cdouble defect = metric.g_zzbar.at(i, j) - cdouble{1.0 / (2.0 * y * y), 0.0};
      total += std::norm(metric.g_zz.at(i, j)) + std::norm(metric.g_zbzb.at(i, j)) +
               std::norm(defect);
    }
  }
  return std::sqrt(total * h2);
}

double upper_mass(const ComplexField& component, double min_im) {
  const GridSpec& spec = component.spec();
  double h2 = spec.spacing() * spec.spacing();
  double total = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      if (spec.node(i, j).imag() < min_im) continue;
      total += std::norm(component.at(i, j));
    }
  }
  return std::sqrt(total * h2);
}

} // namespace beltrami
