#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "beltrami/errors.hpp"
#include "beltrami/families.hpp"
#include "beltrami/grid.hpp"
#include "beltrami/solver.hpp"
#include "beltrami/transforms.hpp"

using namespace beltrami;

namespace {

ComplexField plateau(const GridSpec& grid, double amplitude) {
  // Width far above the cut radius: the Gaussian factor is flat and |mu| is
  // essentially the amplitude across the whole support plateau.
  return sample_bump(grid, BumpSpec{cdouble{0, 0}, cdouble{amplitude, 0}, 50.0, 1.0, 1.45});
}

double rel_l2(const ComplexField& got, const ComplexField& want) {
  ComplexField diff = got;
  diff -= want;
  return lp_norm(diff, 2.0) / lp_norm(want, 2.0);
}

} // namespace

TEST_CASE("coefficient validation") {
  GridSpec grid = GridSpec::make(128, cdouble{0, 0}, 4.0);
  // sup >= 1 is not uniformly elliptic.
  ComplexField big = sample_bump(grid, BumpSpec{cdouble{0, 0}, cdouble{1.1, 0}, 1.0, 1.0, 1.45});
  CHECK_THROWS_AS((void)BeltramiCoefficient::from_field(big), config_error);
  // Directions may exceed it.
  BeltramiCoefficient dir = BeltramiCoefficient::from_field(big, false);
  CHECK(dir.sup() > 1.0);

  // Support past half_width / 2 breaks periodization control.
  ComplexField wide = sample_bump(grid, BumpSpec{cdouble{0, 0}, cdouble{0.3, 0}, 1.0, 2.2, 3.0});
  CHECK_THROWS_AS((void)BeltramiCoefficient::from_field(wide), invariant_error);

  BeltramiCoefficient mu =
      BeltramiCoefficient::from_field(plateau(grid, 0.35));
  CHECK(mu.sup() == doctest::Approx(0.35).epsilon(1e-3));
  CHECK(mu.support_radius() <= 1.45 + 1e-12);
}

TEST_CASE("solve certifies its residual") {
  StandardFamily fam = standard_family(256);
  BeltramiCoefficient mu = BeltramiCoefficient::from_field(sample_bump(fam.grid, fam.mu));
  ComplexField v = sample_bump(fam.grid, fam.dir);
  double v_norm = lp_norm(v, 2.0);

  SolveReport rep = solve_inhomogeneous(mu, v, 1e-10, 200);
  CHECK(rep.converged);
  CHECK(rep.residual <= 1e-10 * v_norm);
  CHECK(rep.contraction_estimate <= mu.sup() + 0.05);

  // The certified residual is reproducible from the returned derivatives.
  ComplexField res = rep.solution.derivative(0, 1);
  ComplexField mdz = pointwise_multiply(mu.field(), rep.solution.derivative(1, 0));
  res -= mdz;
  res -= v;
  CHECK(lp_norm(res, 2.0) == doctest::Approx(rep.residual).epsilon(1e-9));
}

TEST_CASE("zero coefficient solves in one step to the cauchy transform") {
  StandardFamily fam = standard_family(128);
  auto plan = TransformPlan::make(fam.grid, 2);
  BeltramiCoefficient zero =
      BeltramiCoefficient::from_field(ComplexField::zeros(fam.grid));
  ComplexField v = sample_bump(fam.grid, fam.dir);

  SolveReport rep = solve_inhomogeneous(zero, v, 1e-10, 200, plan);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);

  SolutionField pv = SolutionField::cauchy_of(v, plan);
  CHECK(rel_l2(rep.solution.values(), pv.values()) < 1e-14);

  // d_zbar P(v) = v holds in the derivative algebra.
  CHECK(rel_l2(rep.solution.derivative(0, 1), v) < 1e-13);
}

TEST_CASE("manufactured solutions are recovered") {
  GridSpec grid = GridSpec::make(256, cdouble{0, 0}, 4.0);
  ComplexField u0 = sample_function(grid, [](cdouble z) {
    return std::exp(-2.0 * std::norm(z - cdouble{0.1, -0.2})) * (cdouble{0.7, 0.3} + 0.2 * z);
  });
  BeltramiCoefficient mu = BeltramiCoefficient::from_field(
      sample_bump(grid, BumpSpec{cdouble{-0.5, 0}, cdouble{0.4, 0}, 1.0, 1.0, 1.45}));
  ComplexField v = wirtinger(u0, 0, 1);
  ComplexField mdz = pointwise_multiply(mu.field(), wirtinger(u0, 1, 0));
  v -= mdz;

  SolveReport rep = solve_inhomogeneous(mu, v, 1e-12, 200);
  require_converged(rep, "manufactured");

  // The solver pins its solution at the node nearest 0, so recovery holds up
  // to one additive constant.
  ComplexField diff = rep.solution.values();
  diff -= u0;
  auto [i0, j0] = node_nearest_zero(grid);
  cdouble shift = diff.at(i0, j0);
  for (std::size_t k = 0; k < diff.size(); ++k) diff.data()[k] -= shift;
  CHECK(lp_norm(diff, 2.0) / lp_norm(u0, 2.0) < 1e-10);
}

TEST_CASE("plateau coefficients contract at their amplitude") {
  GridSpec grid = GridSpec::make(128, cdouble{0, 0}, 4.0);
  ComplexField v = sample_bump(grid, BumpSpec{cdouble{0.3, 0.2}, cdouble{1, 0}, 0.5, 1.0, 1.45});

  int prev_iterations = 0;
  for (double s : {0.2, 0.5, 0.8}) {
    CAPTURE(s);
    BeltramiCoefficient mu = BeltramiCoefficient::from_field(plateau(grid, s));
    SolveReport rep = solve_inhomogeneous(mu, v, 1e-10, 200);
    CHECK(rep.converged);
    CHECK(rep.contraction_estimate <= s + 0.05);
    for (std::size_t m = 3; m + 1 < rep.residual_history.size(); ++m) {
      CHECK(rep.residual_history[m + 1] / rep.residual_history[m] <= s + 0.05);
    }
    // Harder coefficients take at least as many iterations.
    CHECK(rep.iterations >= prev_iterations);
    prev_iterations = rep.iterations;
  }
}

TEST_CASE("the solve is homogeneous in the data") {
  StandardFamily fam = standard_family(128);
  BeltramiCoefficient mu = BeltramiCoefficient::from_field(sample_bump(fam.grid, fam.mu));
  ComplexField v = sample_bump(fam.grid, fam.dir);
  cdouble c{2.0, -0.5};
  ComplexField cv = v;
  cv *= c;

  SolveReport plain = solve_inhomogeneous(mu, v);
  SolveReport scaled = solve_inhomogeneous(mu, cv);
  ComplexField want = plain.solution.values();
  want *= c;
  CHECK(rel_l2(scaled.solution.values(), want) < 1e-13);
}

TEST_CASE("iteration cap reports non-convergence") {
  StandardFamily fam = standard_family(128);
  BeltramiCoefficient mu = BeltramiCoefficient::from_field(plateau(fam.grid, 0.5));
  ComplexField v = sample_bump(fam.grid, fam.dir);

  SolveReport rep = solve_inhomogeneous(mu, v, 1e-10, 3);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.residual > 1e-10 * lp_norm(v, 2.0));
  CHECK_THROWS_AS(require_converged(rep, "capped"), convergence_error);
}

TEST_CASE("canonical solution is normalized and recovers its coefficient") {
  StandardFamily fam = standard_family(256);
  BeltramiCoefficient mu = BeltramiCoefficient::from_field(sample_bump(fam.grid, fam.mu));

  SolveReport rep = canonical_solution(mu);
  require_converged(rep, "canonical");
  CHECK(std::abs(rep.solution.value_at(cdouble{0, 0})) < 1e-13);
  CHECK(std::abs(rep.solution.value_at(cdouble{1, 0}) - cdouble{1, 0}) < 1e-13);

  // d_zbar f / d_z f reproduces mu where the solve is elliptic.
  ComplexField fz = rep.solution.derivative(1, 0);
  ComplexField fzb = rep.solution.derivative(0, 1);
  const GridSpec& grid = fam.grid;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      if (std::abs(grid.node(i, j)) > 2.0) continue;
      cdouble rec = fzb.at(i, j) / fz.at(i, j);
      num += std::norm(rec - mu.field().at(i, j));
      den += std::norm(mu.field().at(i, j));
    }
  }
  CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("zero coefficient gives the identity map") {
  GridSpec grid = GridSpec::make(128, cdouble{0, 0}, 4.0);
  BeltramiCoefficient zero = BeltramiCoefficient::from_field(ComplexField::zeros(grid));
  SolveReport rep = canonical_solution(zero);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  for (auto [i, j] : {std::pair{0, 0}, {13, 77}, {64, 64}, {127, 1}}) {
    CHECK(rep.solution.values().at(i, j) == grid.node(i, j));
  }
}

TEST_CASE("radial fixture agrees with the canonical solver") {
  RadialFixture rf{};
  GridSpec grid = GridSpec::make(256, cdouble{0, 0}, 4.0);

  // Closed-form self-consistency: dzbar = mu dz pointwise.
  for (double x : {0.3, 0.7, 1.2, 1.6}) {
    for (double y : {0.1, -0.5}) {
      cdouble z{x, y};
      CHECK(std::abs(rf.dzbar(z) - rf.mu(z) * rf.dz(z)) < 1e-15);
    }
  }

  // Pure-stretch core: |mu| = alpha / (2 + alpha) exactly inside r0.
  double core = rf.alpha / (2.0 + rf.alpha);
  for (double r : {0.2, 0.5, 0.9}) {
    CHECK(std::abs(rf.mu(cdouble{r, 0.1})) == doctest::Approx(core).epsilon(1e-12));
  }

  ComplexField mu_field = sample_function(grid, [&](cdouble z) { return rf.mu(z); });
  BeltramiCoefficient mu = BeltramiCoefficient::from_field(mu_field);
  CHECK(mu.sup() < 0.3); // cap band overshoots the core value but stays elliptic
  CHECK(mu.support_radius() <= rf.r1 + 1e-12);

  // The fixture already satisfies the canonical normalization f(0) = 0,
  // f(1) = 1, so the solve can be compared directly. Accuracy is limited by
  // the r^alpha crease at the origin.
  SolveReport rep = canonical_solution(mu);
  require_converged(rep, "radial");
  ComplexField ref = sample_function(grid, [&](cdouble z) { return rf.value(z); });
  ComplexField diff = rep.solution.values();
  diff -= ref;
  DiskRegion d1 = DiskRegion::make(cdouble{0, 0}, 1.0);
  CHECK(lp_norm(diff, 2.0, d1) / lp_norm(ref, 2.0, d1) < 1e-4);

  // Sampled residual of the closed form under the discrete derivatives: the
  // crease keeps this at quadrature scale, not solver scale.
  ComplexField res = wirtinger(ref, 0, 1);
  ComplexField mdz = pointwise_multiply(mu_field, wirtinger(ref, 1, 0));
  res -= mdz;
  CHECK(lp_norm(res, 2.0, DiskRegion::make(cdouble{0, 0}, 0.5)) < 2e-3);
}

TEST_CASE("degenerating family slopes approach -2/q") {
  std::vector<double> radii4 = remark_default_radii(4.0);
  CHECK(radii4.size() == 7);
  CHECK(radii4.front() == doctest::Approx(1e-1).epsilon(1e-12));
  CHECK(radii4.back() == doctest::Approx(1e-3).epsilon(1e-12));

  double s4 = remark_fixture_slope(4.0, radii4);
  CHECK(s4 == doctest::Approx(-0.47927902614657103).epsilon(1e-7));
  CHECK(std::abs(s4 - (-0.5)) < 0.05);

  double s8 = remark_fixture_slope(8.0, remark_default_radii(8.0));
  CHECK(s8 == doctest::Approx(-0.22488404765198197).epsilon(1e-7));
  CHECK(std::abs(s8 - (-0.25)) < 0.05);

  // Deep in the core the large-q family is nearly conformal.
  std::vector<double> radii100 = remark_default_radii(100.0);
  CHECK(radii100.front() == doctest::Approx(1e-5).epsilon(1e-12));
  double s100 = remark_fixture_slope(100.0, radii100);
  CHECK(s100 > -0.05);
  CHECK(s100 < 0.0);

  CHECK_THROWS_AS((void)remark_fixture_slope(2.0, radii4), config_error);
}

TEST_CASE("elliptic ratio guards its preconditions") {
  GridSpec grid = GridSpec::make(128, cdouble{0, 0}, 4.0);
  BeltramiCoefficient zero = BeltramiCoefficient::from_field(ComplexField::zeros(grid));

  ComplexField nothing = ComplexField::zeros(grid);
  CHECK_THROWS_AS((void)elliptic_ratio(zero, nothing, nothing, 1.0, 2.0, 0, 2.0),
                  invariant_error);

  // A pair that does not satisfy the equation is rejected.
  ComplexField u = sample_bump(grid, BumpSpec{cdouble{0, 0}, cdouble{1, 0}, 0.5, 1.0, 1.45});
  ComplexField v = sample_bump(grid, BumpSpec{cdouble{0.5, 0}, cdouble{1, 0}, 0.5, 1.0, 1.45});
  CHECK_THROWS_AS((void)elliptic_ratio(zero, u, v, 1.0, 2.0, 0, 2.0), invariant_error);

  CHECK_THROWS_AS((void)elliptic_ratio(zero, u, wirtinger(u, 0, 1), 2.0, 1.0, 0, 2.0),
                  config_error); // r < R required
}

TEST_CASE("elliptic ratio is stable under refinement") {
  double ratios[2];
  int idx = 0;
  for (int n : {128, 256}) {
    GridSpec grid = GridSpec::make(n, cdouble{0, 0}, 4.0);
    BeltramiCoefficient zero = BeltramiCoefficient::from_field(ComplexField::zeros(grid));
    ComplexField v =
        sample_bump(grid, BumpSpec{cdouble{0.2, -0.1}, cdouble{1, 0.3}, 0.5, 1.0, 1.45});
    SolveReport rep = solve_inhomogeneous(zero, v);
    DerivativeSource derivs = [&rep](int a, int b) { return rep.solution.derivative(a, b); };
    ratios[idx++] = elliptic_ratio(zero, derivs, v, 1.0, 2.0, 0, 2.0);
  }
  CHECK(ratios[0] > 0.0);
  CHECK(std::abs(ratios[1] / ratios[0] - 1.0) < 0.2);
}
