#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "beltrami/bers.hpp"
#include "beltrami/errors.hpp"
#include "beltrami/families.hpp"
#include "beltrami/grid.hpp"

using namespace beltrami;

namespace {

const GridSpec kGrid = GridSpec::make(256, cdouble{0, 0}, 4.0);

BeltramiCoefficient zero_mu() {
  return BeltramiCoefficient::from_field(ComplexField::zeros(kGrid));
}

BeltramiCoefficient upper_bump(double amp) {
  return BeltramiCoefficient::from_field(
      sample_bump(kGrid, BumpSpec{cdouble{0.0, 1.0}, cdouble{amp, 0.0}, 0.5, 0.5, 0.9}));
}

BeltramiCoefficient lower_bump() {
  return BeltramiCoefficient::from_field(
      sample_bump(kGrid, BumpSpec{cdouble{0.3, -1.0}, cdouble{0.25, 0.1}, 0.5, 0.5, 0.8}));
}

} // namespace

TEST_CASE("gluing validates grids, axis and margins") {
  // Coefficient mass within 2 spacings of the axis cannot be glued.
  BeltramiCoefficient close_to_axis = BeltramiCoefficient::from_field(
      sample_bump(kGrid, BumpSpec{cdouble{0.0, 0.1}, cdouble{0.2, 0.0}, 0.3, 0.2, 0.35}));
  CHECK_THROWS_WITH_AS((void)GluedCoefficient::make(close_to_axis, zero_mu()),
                       doctest::Contains("node"), config_error);
  // Same field offered as the lower coefficient is on the wrong side.
  CHECK_THROWS_AS((void)GluedCoefficient::make(zero_mu(), close_to_axis), config_error);

  // The grid center must sit on the real axis so rows mirror exactly.
  GridSpec off_axis = GridSpec::make(64, cdouble{0.0, 0.5}, 4.0);
  BeltramiCoefficient z_off = BeltramiCoefficient::from_field(ComplexField::zeros(off_axis));
  CHECK_THROWS_AS((void)GluedCoefficient::make(z_off, z_off), config_error);

  GridSpec smaller = GridSpec::make(128, cdouble{0, 0}, 4.0);
  BeltramiCoefficient z_small = BeltramiCoefficient::from_field(ComplexField::zeros(smaller));
  CHECK_THROWS_AS((void)GluedCoefficient::make(zero_mu(), z_small), invariant_error);
}

TEST_CASE("gluing splices the halves and zeroes the axis row") {
  BeltramiCoefficient m1 = upper_bump(0.3);
  BeltramiCoefficient m2 = lower_bump();
  GluedCoefficient glued = GluedCoefficient::make(m1, m2);

  CHECK(glued.glued.sup() == std::max(m1.sup(), m2.sup()));
  const ComplexField& g = glued.glued.field();
  for (int i = 0; i < kGrid.n; ++i) {
    CHECK(g.at(i, kGrid.n / 2) == cdouble{0.0, 0.0}); // axis row
  }
  // Upper rows carry mu1, lower rows mu2.
  CHECK(g.at(128, 160) == m1.field().at(128, 160));
  CHECK(g.at(100, 96) == m2.field().at(100, 96));

  GluedCoefficient trivial = GluedCoefficient::make(zero_mu(), zero_mu());
  CHECK(sup_norm(trivial.glued.field()) == 0.0);
}

TEST_CASE("reflect_conjugate is the axis involution") {
  ComplexField u = sample_bump(kGrid, BumpSpec{cdouble{0.4, 0.8}, cdouble{0.3, -0.2}, 0.5, 0.5, 0.9});
  ComplexField r = reflect_conjugate(u);

  for (int i = 0; i < kGrid.n; ++i) {
    CHECK(r.at(i, 0) == cdouble{0.0, 0.0}); // no mirror node
    for (int j = 1; j < kGrid.n; ++j) {
      CHECK(r.at(i, j) == std::conj(u.at(i, kGrid.n - j)));
    }
  }

  // Involution away from row 0 (which the bump above never touches).
  ComplexField rr = reflect_conjugate(r);
  ComplexField diff = rr;
  diff -= u;
  CHECK(sup_norm(diff) == 0.0);

  // Gluing a coefficient with its reflection produces the symmetric field.
  BeltramiCoefficient m1 = upper_bump(0.3);
  GluedCoefficient sym =
      GluedCoefficient::make(m1, BeltramiCoefficient::from_field(reflect_conjugate(m1.field())));
  const ComplexField& g = sym.glued.field();
  double worst = 0.0;
  for (int i = 0; i < kGrid.n; ++i) {
    for (int j = 1; j < kGrid.n; ++j) {
      worst = std::max(worst, std::abs(g.at(i, kGrid.n - j) - std::conj(g.at(i, j))));
    }
  }
  CHECK(worst == 0.0);
}

TEST_CASE("zero coefficients uniformize to the hyperbolic plane") {
  GluedCoefficient glued = GluedCoefficient::make(zero_mu(), zero_mu());
  UniformizationResult u = simultaneous_uniformize(glued);
  CHECK(u.solve.iterations == 1);

  // f = z, so f1 = z and f2bar = zbar on the upper rows.
  for (auto [i, j] : {std::pair{128, 144}, {40, 200}, {222, 129}}) {
    cdouble z = kGrid.node(i, j);
    CHECK(u.f1.at(i, j) == z);
    CHECK(u.f2bar.at(i, j) == std::conj(z));
    CHECK(u.f1_dz.at(i, j) == cdouble{1.0, 0.0});
    CHECK(u.f1_dzbar.at(i, j) == cdouble{0.0, 0.0});
    CHECK(u.f2bar_dzbar.at(i, j) == cdouble{1.0, 0.0});
    CHECK(u.f2bar_dz.at(i, j) == cdouble{0.0, 0.0});
  }
  // |z - zbar| = 2 Im z, minimized on the Im z = 0.5 node row.
  CHECK(u.min_separation == 1.0);

  MetricComponents met = bers_metric(u);
  // g_zzbar = 1/(2 y^2) exactly in closed form; at z = i that is 1/2.
  auto [i0, j0] = node_nearest_zero(kGrid);
  CHECK(met.g_zzbar.at(i0, j0 + 32) == cdouble{0.5, 0.0}); // node i: 32 rows above center
  CHECK(met.g_zz.at(i0, j0 + 32) == cdouble{0.0, 0.0});

  DiskRegion region = DiskRegion::make(cdouble{0.0, 2.0}, 1.5);
  CHECK(hyperbolic_defect(met, region) < 1e-12);
}

TEST_CASE("metric is invariant under a shared conformal factor and swap") {
  // f1 = 2z, f2bar = 2 zbar describe the same structure as the identity.
  ComplexField f1 = sample_function(kGrid, [](cdouble z) { return 2.0 * z; });
  ComplexField f2b = sample_function(kGrid, [](cdouble z) { return 2.0 * std::conj(z); });
  ComplexField two = sample_function(kGrid, [](cdouble) { return cdouble{2.0, 0.0}; });
  ComplexField zero = ComplexField::zeros(kGrid);

  MetricComponents met = bers_metric(f1, two, zero, f2b, zero, two);
  auto [i0, j0] = node_nearest_zero(kGrid);
  CHECK(met.g_zzbar.at(i0, j0 + 32) == cdouble{0.5, 0.0});
  DiskRegion region = DiskRegion::make(cdouble{0.0, 2.0}, 1.5);
  CHECK(hyperbolic_defect(met, region) < 1e-12);

  // The formula is symmetric in the two maps.
  BeltramiCoefficient m1 = upper_bump(0.3);
  GluedCoefficient glued = GluedCoefficient::make(m1, lower_bump());
  UniformizationResult u = simultaneous_uniformize(glued);
  MetricComponents a = bers_metric(u.f1, u.f1_dz, u.f1_dzbar, u.f2bar, u.f2bar_dz, u.f2bar_dzbar);
  MetricComponents b = bers_metric(u.f2bar, u.f2bar_dz, u.f2bar_dzbar, u.f1, u.f1_dz, u.f1_dzbar);
  ComplexField d = a.g_zzbar;
  d -= b.g_zzbar;
  CHECK(sup_norm(d) == 0.0);
}

TEST_CASE("uniformization satisfies both beltrami equations on the half grid") {
  GluedCoefficient glued = GluedCoefficient::make(upper_bump(0.3), lower_bump());
  UniformizationResult u = simultaneous_uniformize(glued);
  CHECK(u.min_separation > 0.5);

  const ComplexField& g = glued.glued.field();
  double num1 = 0, den1 = 0, num2 = 0, den2 = 0;
  for (int i = 0; i < kGrid.n; ++i) {
    for (int j = kGrid.n / 2 + 1; j < kGrid.n; ++j) {
      if (kGrid.node(i, j).imag() < 0.5) continue;
      // d_zbar f1 = mu1 d_z f1 at z.
      num1 += std::norm(u.f1_dzbar.at(i, j) - g.at(i, j) * u.f1_dz.at(i, j));
      den1 += std::norm(u.f1_dz.at(i, j));
      // d_z f2bar = mu2(zbar) d_zbar f2bar at z, by the reflection chain rule.
      num2 += std::norm(u.f2bar_dz.at(i, j) - g.at(i, kGrid.n - j) * u.f2bar_dzbar.at(i, j));
      den2 += std::norm(u.f2bar_dzbar.at(i, j));
    }
  }
  CHECK(std::sqrt(num1 / den1) < 1e-10);
  CHECK(std::sqrt(num2 / den2) < 1e-10);
}

TEST_CASE("generic pairs leave a large hyperbolic defect") {
  GluedCoefficient glued = GluedCoefficient::make(upper_bump(0.3), lower_bump());
  UniformizationResult u = simultaneous_uniformize(glued);
  MetricComponents met = bers_metric(u);
  DiskRegion region = DiskRegion::make(cdouble{0.0, 2.0}, 1.5);
  double defect = hyperbolic_defect(met, region);
  CHECK(defect == doctest::Approx(0.323268).epsilon(0.01));
  CHECK(defect > 0.1); // orders above the zero-pair floor
}

TEST_CASE("one-sided perturbations deposit first-order metric mass") {
  double mass[2];
  int idx = 0;
  for (double amp : {0.05, 0.1}) {
    GluedCoefficient glued = GluedCoefficient::make(upper_bump(amp), zero_mu());
    UniformizationResult u = simultaneous_uniformize(glued);
    MetricComponents met = bers_metric(u);
    mass[idx++] = upper_mass(met.g_zbzb, 0.5);
  }
  CHECK(mass[0] == doctest::Approx(0.04099110).epsilon(1e-4));
  double ratio = mass[1] / mass[0];
  CHECK(ratio > 1.9);
  CHECK(ratio < 2.1);
}

TEST_CASE("collided image discs are reported with the node") {
  ComplexField f1 = sample_function(kGrid, [](cdouble z) { return z; });
  ComplexField one = sample_function(kGrid, [](cdouble) { return cdouble{1.0, 0.0}; });
  ComplexField zero = ComplexField::zeros(kGrid);
  // f2bar = f1 collapses the denominator everywhere above the axis.
  CHECK_THROWS_WITH_AS((void)bers_metric(f1, one, zero, f1, zero, one),
                       doctest::Contains("node"), invariant_error);
}

TEST_CASE("hyperbolic defect validates its region") {
  GluedCoefficient glued = GluedCoefficient::make(zero_mu(), zero_mu());
  MetricComponents met = bers_metric(simultaneous_uniformize(glued));

  // Region dipping below Im z = 0.5.
  CHECK_THROWS_AS((void)hyperbolic_defect(met, DiskRegion::make(cdouble{0.0, 1.0}, 0.8)),
                  config_error);
  // Region leaving the grid square.
  CHECK_THROWS_AS((void)hyperbolic_defect(met, DiskRegion::make(cdouble{0.0, 3.5}, 1.0)),
                  config_error);
}

TEST_CASE("upper mass sums exactly over the half plane cut") {
  ComplexField one = sample_function(kGrid, [](cdouble) { return cdouble{1.0, 0.0}; });
  double h = kGrid.spacing();
  int rows_above = 0;
  for (int j = 0; j < kGrid.n; ++j) {
    if (kGrid.node(0, j).imag() >= 0.5) ++rows_above;
  }
  double want = std::sqrt(static_cast<double>(rows_above) * kGrid.n * h * h);
  CHECK(upper_mass(one, 0.5) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("metric convention string is pinned") {
  CHECK(std::strcmp(kMetricConvention,
                    "h = g_zz dz^2 + 2 g_zzbar dz.dzbar + g_zbzb dzbar^2") == 0);
}
