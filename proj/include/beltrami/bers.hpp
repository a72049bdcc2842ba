#pragma once

#include <memory>

#include "beltrami/solver.hpp"

namespace beltrami {

/// Tensor convention the metric components are stored in.
inline constexpr const char* kMetricConvention =
    "h = g_zz dz^2 + 2 g_zzbar dz.dzbar + g_zbzb dzbar^2";

/// A coefficient glued across the real axis: mu1 above, mu2 below, zero on
/// the axis row. Gluing requires the grid center on the real axis and each
/// half's support at distance >= 2 spacing from it, so the discrete axis
/// never sees either coefficient.
struct GluedCoefficient {
  BeltramiCoefficient mu1;
  BeltramiCoefficient mu2;
  BeltramiCoefficient glued;

  static GluedCoefficient make(BeltramiCoefficient mu1, BeltramiCoefficient mu2);
};

/// out(z) = conj(in(conj(z))): reflects a field across the real axis with
/// value conjugation, the involution pairing upper and lower coefficients.
/// Row 0 has no mirror node and is set to zero.
ComplexField reflect_conjugate(const ComplexField& in);

/// The two uniformizing maps extracted from one canonical solve of the glued
/// coefficient. All fields live on the full grid but carry data only on rows
/// with Im z >= 0: f1 is the restriction of f to the closed upper half, and
/// f2bar(z) = f(conj(z)) re-parametrizes the lower half by its conjugate
/// node. Derivatives come from the solve's exact derivative algebra, with
/// d f2bar read off by the reflection chain rule
///   d_z f2bar(z) = (d_zbar f)(conj z),  d_zbar f2bar(z) = (d_z f)(conj z).
struct UniformizationResult {
  SolveReport solve;
  ComplexField f1;
  ComplexField f1_dz;
  ComplexField f1_dzbar;
  ComplexField f2bar;
  ComplexField f2bar_dz;
  ComplexField f2bar_dzbar;
  /// min |f1 - f2bar| over nodes with Im z >= 0.5; positive iff the two
  /// image discs stay separated there (2 Im z for the identity).
  double min_separation = 0.0;
};

UniformizationResult simultaneous_uniformize(const GluedCoefficient& glued, double tol = 1e-10,
                                             int max_iter = 200,
                                             std::shared_ptr<const TransformPlan> plan = nullptr);

/// Components of -4/(f1 - f2bar)^2 df1 . df2bar in the kMetricConvention
/// form, stored on rows with Im z > 0 (zero elsewhere).
struct MetricComponents {
  ComplexField g_zz;
  ComplexField g_zzbar;
  ComplexField g_zbzb;
};

/// Metric from explicit maps and their Wirtinger derivatives. Evaluated only
/// at nodes with Im z > 0; |f1 - f2bar| < 1e-8 anywhere there means the
/// image discs collided and raises invariant_error naming the node.
MetricComponents bers_metric(const ComplexField& f1, const ComplexField& f1_dz,
                             const ComplexField& f1_dzbar, const ComplexField& f2bar,
                             const ComplexField& f2bar_dz, const ComplexField& f2bar_dzbar);

MetricComponents bers_metric(const UniformizationResult& maps);

/// Combined L^2(region) distance of the metric to the hyperbolic one in
/// these coordinates: sqrt of the summed squares of g_zz, g_zbzb and
/// g_zzbar - 1/(2 y^2) over region nodes. The region must lie in
/// Im z >= 0.5, where the glued construction is expected to degenerate to
/// the hyperbolic plane when mu1 and mu2 represent the same structure.
double hyperbolic_defect(const MetricComponents& metric, const DiskRegion& region);

/// L^2 mass of a component over nodes with Im z >= min_im; used to measure
/// how much metric a one-sided perturbation deposits.
double upper_mass(const ComplexField& component, double min_im);

} // namespace beltrami
