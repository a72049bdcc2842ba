#pragma once

#include <cstdint>
#include <random>

#include "beltrami/grid.hpp"

namespace beltrami {

/// C-infinity cutoff: exactly 1 for t <= 0, exactly 0 for t >= 1, strictly
/// decreasing in between (glued from exp(-1/t)). Sampled fields truncated with
/// it are exactly zero past the cut, which keeps support invariants sharp.
double falloff(double t);

/// Derivative of falloff; vanishes to all orders at both ends.
double falloff_prime(double t);

/// Gaussian bump with a smooth annular truncation to exact compact support:
///   amplitude * exp(-r^2 / width^2) * falloff((r - cut_start) / (cut_end - cut_start)),
/// r = |z - center|. Cut radii are absolute distances from the bump center.
struct BumpSpec {
  cdouble center{0.0, 0.0};
  cdouble amplitude{0.0, 0.0};
  double width = 1.0;
  double cut_start = 1.0;
  double cut_end = 1.45;

  cdouble operator()(cdouble z) const;
  double support_radius() const { return cut_end; }
};

ComplexField sample_bump(const GridSpec& grid, const BumpSpec& bump);

/// The coefficient/direction pair most tests run on: half_width 4 centered at
/// 0, mu a 0.4-amplitude bump at -0.5, direction a 0.5-amplitude bump at 0.5i,
/// both truncated over [1.0, 1.45] so they vanish identically past radius 1.45
/// from their centers.
struct StandardFamily {
  GridSpec grid;
  BumpSpec mu;
  BumpSpec dir;
};

StandardFamily standard_family(int n = 256);

/// Closed-form quasiconformal diffeomorphism used as an oracle for the
/// canonical solver: with E(z) = exp(-|z|^2) and c = 0.3,
///   g(z) = (z + c E(z) zbar) / (1 + c e^{-1}),
/// which fixes 0 and 1. Its Beltrami coefficient decays like E, so for grid
/// work it is truncated smoothly over [3.85, 4.55] (response ~1e-7).
struct OracleDiffeo {
  double c = 0.3;

  cdouble value(cdouble z) const;
  cdouble dz(cdouble z) const;
  cdouble dzbar(cdouble z) const;
  cdouble mu(cdouble z) const;
  cdouble mu_truncated(cdouble z) const;
};

/// Subtracts a fixed interior bump scaled so the plain sample sum of the
/// result is exactly zero; the discrete mean then vanishes over the grid and
/// over any padded square containing it. Smoothness and compact support are
/// preserved. Transform identity tests need this because the discrete
/// multipliers drop the zero mode.
ComplexField make_mean_free(const ComplexField& u);

/// Deterministic stream of smooth random bumps for probes and sweeps: centers
/// within 0.2 half_width of the grid center, widths in [0.075, 0.125]
/// half_width, complex amplitudes of modulus in [0.5, 1.5]. Support stays
/// inside the central half of the grid.
class BumpSampler {
public:
  explicit BumpSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in [lo, hi) from the top 53 bits of the generator.
  double uniform(double lo, double hi);

  BumpSpec next(const GridSpec& grid);

private:
  std::mt19937_64 rng_;
};

} // namespace beltrami
