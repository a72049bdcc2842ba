#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "beltrami/solver.hpp"

namespace beltrami {

/// Disk of radius half_width/2 about the grid center: the fixed reporting
/// region all variation norms are taken over, so runs stay comparable.
DiskRegion reporting_region(const GridSpec& grid);

/// The parameter-derivative of mu -> f^mu in a direction a, together with the
/// two solves that produced it.
struct ThetaReport {
  /// Canonical solve for f^mu.
  SolveReport base;
  /// Solve of (d_zbar - mu d_z) theta_raw = a d_z f^mu.
  SolveReport linear;
  /// theta_raw - theta_raw(1) f^mu, so theta(0) = theta(1) = 0 and the
  /// equation still holds (f^mu solves the homogeneous equation).
  SolutionField theta;
  /// Right side a d_z f^mu actually fed to the linear solve.
  ComplexField rhs;
};

/// Directional derivative of the canonical solution at mu in direction dir.
ThetaReport theta(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                  double tol = 1e-10, int max_iter = 200,
                  std::shared_ptr<const TransformPlan> plan = nullptr);

/// Same, reusing an already computed canonical solve for f^mu. When plan is
/// null the base solve's plan is reused so fields stay combinable.
ThetaReport theta(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                  const SolveReport& base, double tol = 1e-10, int max_iter = 200,
                  std::shared_ptr<const TransformPlan> plan = nullptr);

/// Central difference (f^{mu + s a + s^2 drift} - f^{mu - s a + s^2 drift}) / (2s).
/// drift, when given, is the fixed bump b of an error family alpha(s) = s b;
/// the limit s -> 0 must not depend on it.
SolutionField finite_difference_derivative(const BeltramiCoefficient& mu,
                                           const BeltramiCoefficient& dir, double s,
                                           const ComplexField* drift = nullptr,
                                           double tol = 1e-10, int max_iter = 200,
                                           std::shared_ptr<const TransformPlan> plan = nullptr);

/// W^{1,2} norm over the reporting region of the discrete conjugate parameter
/// derivative at t = 0 of t -> f^{mu + t a}:
///   (1/2) [ (f^{mu+sa} - f^{mu-sa}) / (2s) + i (f^{mu+isa} - f^{mu-isa}) / (2s) ].
/// Holomorphic dependence makes this O(s^2); with conjugate_family the family
/// is t -> f^{mu + conj(t) a} instead, whose defect is theta-sized, so the
/// measurement distinguishes holomorphic from anti-holomorphic dependence.
double cauchy_riemann_defect(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                             double s, bool conjugate_family = false, double tol = 1e-10,
                             int max_iter = 200,
                             std::shared_ptr<const TransformPlan> plan = nullptr);

/// For each s in s_values, the first-order development residual
///   ||f^{mu+sa} - f^mu - s theta||_{W^{k+1,2}(reporting region)} / s.
/// Differentiability makes the list decrease as s does.
std::vector<std::pair<double, double>> development_residual(
    const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
    std::span<const double> s_values, int k, double tol = 1e-10, int max_iter = 200,
    std::shared_ptr<const TransformPlan> plan = nullptr);

/// Distances ||theta^{mu_n, a_n} - theta^{mu, a}|| along a perturbed family.
struct StabilityReport {
  std::vector<int> levels;
  std::vector<double> distances;
  /// distances[i+1] / distances[i]; near 1/2 for level doubling when the
  /// perturbation enters at first order.
  std::vector<double> ratios;
};

/// Perturbs mu (or dir, with perturb_direction) by perturbation / level for
/// each level and measures the W^{k+1,2}(reporting region) distance of the
/// perturbed theta to the unperturbed one.
StabilityReport stability_check(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                                const ComplexField& perturbation, std::span<const int> levels,
                                bool perturb_direction = false, int k = 0, double tol = 1e-10,
                                int max_iter = 200,
                                std::shared_ptr<const TransformPlan> plan = nullptr);

} // namespace beltrami
