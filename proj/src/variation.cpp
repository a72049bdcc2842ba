#include "beltrami/variation.hpp"

#include <cmath>

#include "beltrami/errors.hpp"

namespace beltrami {

namespace {

std::shared_ptr<const TransformPlan> ensure_plan(const GridSpec& grid,
                                                 std::shared_ptr<const TransformPlan> plan) {
  if (!plan) return TransformPlan::make(grid, 2);
  if (!(plan->grid() == grid)) throw invariant_error("variation: plan grid does not match mu");
  return plan;
}

/// mu + s * dir (+ s2 * drift), validated as an elliptic coefficient.
BeltramiCoefficient perturbed(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                              cdouble s, const ComplexField* drift, double s2) {
  ComplexField field = mu.field();
  field.add_scaled(dir.field(), s);
  if (drift) field.add_scaled(*drift, s2);
  return BeltramiCoefficient::from_field(std::move(field));
}

double report_norm(const SolutionField& u, int k) {
  return u.sobolev(SobolevSpec::make(k, 2.0, reporting_region(u.grid())));
}

} // namespace

DiskRegion reporting_region(const GridSpec& grid) {
  return DiskRegion::make(grid.center, grid.half_width / 2.0);
}

ThetaReport theta(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir, double tol,
                  int max_iter, std::shared_ptr<const TransformPlan> plan) {
  plan = ensure_plan(mu.grid(), std::move(plan));
  SolveReport base = canonical_solution(mu, tol, max_iter, plan);
  require_converged(base, "theta: canonical solve");
  return theta(mu, dir, base, tol, max_iter, std::move(plan));
}

ThetaReport theta(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                  const SolveReport& base, double tol, int max_iter,
                  std::shared_ptr<const TransformPlan> plan) {
  if (!(dir.grid() == mu.grid())) throw invariant_error("theta: dir grid does not match mu");
  if (!plan) plan = base.solution.plan();
  if (!(plan->grid() == mu.grid())) throw invariant_error("theta: plan grid does not match mu");
  if (base.solution.plan() != plan) {
    throw invariant_error("theta: base solve was made with a different plan");
  }

  ComplexField rhs = pointwise_multiply(dir.field(), base.solution.derivative(1, 0));
  SolveReport linear = solve_inhomogeneous(mu, rhs, tol, max_iter, plan);
  require_converged(linear, "theta: linear solve");

  // theta_raw(0) = 0 already; subtracting theta_raw(1) f^mu zeros the value
  // at 1 without disturbing the equation or the value at 0.
  cdouble one{1.0, 0.0};
  cdouble scale = linear.solution.value_at(one) / base.solution.value_at(one);
  SolutionField th = linear.solution;
  th.add_scaled(base.solution, -scale);
  return ThetaReport{std::move(base), std::move(linear), std::move(th), std::move(rhs)};
}

SolutionField finite_difference_derivative(const BeltramiCoefficient& mu,
                                           const BeltramiCoefficient& dir, double s,
                                           const ComplexField* drift, double tol, int max_iter,
                                           std::shared_ptr<const TransformPlan> plan) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw config_error("finite_difference_derivative: step must be positive");
  }
  plan = ensure_plan(mu.grid(), std::move(plan));
  double s2 = s * s;
  SolveReport plus = canonical_solution(perturbed(mu, dir, s, drift, s2), tol, max_iter, plan);
  require_converged(plus, "finite difference: +s solve");
  SolveReport minus = canonical_solution(perturbed(mu, dir, -s, drift, s2), tol, max_iter, plan);
  require_converged(minus, "finite difference: -s solve");

  SolutionField out = plus.solution;
  out.add_scaled(minus.solution, -1.0);
  out.rescale(1.0 / (2.0 * s));
  return out;
}

double cauchy_riemann_defect(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                             double s, bool conjugate_family, double tol, int max_iter,
                             std::shared_ptr<const TransformPlan> plan) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw config_error("cauchy_riemann_defect: step must be positive");
  }
  plan = ensure_plan(mu.grid(), std::move(plan));

  // t = conj(t') swaps the two imaginary-axis samples, nothing else.
  cdouble is = conjugate_family ? cdouble{0.0, -s} : cdouble{0.0, s};
  auto solve_at = [&](cdouble step) {
    SolveReport r = canonical_solution(perturbed(mu, dir, step, nullptr, 0.0), tol, max_iter,
                                       plan);
    require_converged(r, "cauchy_riemann_defect: perturbed solve");
    return r;
  };
  SolveReport pr = solve_at(cdouble{s, 0.0});
  SolveReport mr = solve_at(cdouble{-s, 0.0});
  SolveReport pi = solve_at(is);
  SolveReport mi = solve_at(-is);

  SolutionField combo = pr.solution;
  combo.add_scaled(mr.solution, -1.0);
  combo.add_scaled(pi.solution, cdouble{0.0, 1.0});
  combo.add_scaled(mi.solution, cdouble{0.0, -1.0});
  combo.rescale(1.0 / (4.0 * s));
  return report_norm(combo, 1);
}

std::vector<std::pair<double, double>> development_residual(
    const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
    std::span<const double> s_values, int k, double tol, int max_iter,
    std::shared_ptr<const TransformPlan> plan) {
  plan = ensure_plan(mu.grid(), std::move(plan));
  ThetaReport th = theta(mu, dir, tol, max_iter, plan);

  std::vector<std::pair<double, double>> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw config_error("development_residual: steps must be positive");
    }
    SolveReport plus = canonical_solution(perturbed(mu, dir, s, nullptr, 0.0), tol, max_iter,
                                          plan);
    require_converged(plus, "development_residual: perturbed solve");
    SolutionField combo = plus.solution;
    combo.add_scaled(th.base.solution, -1.0);
    combo.add_scaled(th.theta, -s);
    out.emplace_back(s, report_norm(combo, k + 1) / s);
  }
  return out;
}

StabilityReport stability_check(const BeltramiCoefficient& mu, const BeltramiCoefficient& dir,
                                const ComplexField& perturbation, std::span<const int> levels,
                                bool perturb_direction, int k, double tol, int max_iter,
                                std::shared_ptr<const TransformPlan> plan) {
  if (!(perturbation.spec() == mu.grid())) {
    throw invariant_error("stability_check: perturbation grid does not match mu");
  }
  plan = ensure_plan(mu.grid(), std::move(plan));
  ThetaReport limit = theta(mu, dir, tol, max_iter, plan);

  StabilityReport out;
  for (int level : levels) {
    if (level < 1) throw config_error("stability_check: levels must be positive");
    ComplexField bump = perturbation;
    bump *= cdouble{1.0 / level, 0.0};

    ThetaReport shifted = [&] {
      if (perturb_direction) {
        ComplexField dn = dir.field();
        dn += bump;
        auto an = BeltramiCoefficient::from_field(std::move(dn), false);
        return theta(mu, an, limit.base, tol, max_iter, plan);
      }
      ComplexField mn = mu.field();
      mn += bump;
      return theta(BeltramiCoefficient::from_field(std::move(mn)), dir, tol, max_iter, plan);
    }();

    SolutionField diff = shifted.theta;
    diff.add_scaled(limit.theta, -1.0);
    out.levels.push_back(level);
    out.distances.push_back(report_norm(diff, k + 1));
  }
  for (std::size_t i = 1; i < out.distances.size(); ++i) {
    out.ratios.push_back(out.distances[i] / out.distances[i - 1]);
  }
  return out;
}

} // namespace beltrami
