#pragma once

#include <memory>
#include <span>
#include <vector>

#include "beltrami/grid.hpp"
#include "beltrami/transforms.hpp"

namespace beltrami {

/// A Beltrami coefficient (or a perturbation direction) sampled on a grid.
/// Coefficients must be uniformly elliptic (sup |mu| < 1); direction fields
/// reuse the type with require_contractive = false. Either way the support
/// must stay inside the central half of the grid so padded transforms control
/// periodization.
class BeltramiCoefficient {
public:
  static BeltramiCoefficient from_field(ComplexField field, bool require_contractive = true);

  const ComplexField& field() const { return field_; }
  const GridSpec& grid() const { return field_.spec(); }
  double sup() const { return sup_; }
  /// Largest |z - grid center| over nodes where |field| > 1e-13.
  double support_radius() const { return support_radius_; }

private:
  BeltramiCoefficient(ComplexField field, double sup, double support_radius)
      : field_(std::move(field)), sup_(sup), support_radius_(support_radius) {}

  ComplexField field_;
  double sup_;
  double support_radius_;
};

/// Solution fields carried in structured form: an affine part
/// c0 + cz z + czbar zbar plus the Cauchy transform of a stored density.
///
/// The discrete Cauchy multiplier drops the zero mode, so d_zbar P(h) would
/// recover h minus its mean; cauchy_of() reinstates that mean as an explicit
/// czbar ramp. Derivatives then satisfy d_zbar P(h) = h and d_z P(h) = T h
/// exactly in the discrete algebra, which is what makes residuals and
/// derivative identities certifiable at machine precision. Linear
/// combinations stay inside the representation.
class SolutionField {
public:
  /// P(density) with the padded-square mean of the density reinstated as a
  /// zbar ramp, pinned to value zero at the node nearest z = 0.
  static SolutionField cauchy_of(ComplexField density,
                                 std::shared_ptr<const TransformPlan> plan);

  static SolutionField zero(std::shared_ptr<const TransformPlan> plan);

  const GridSpec& grid() const { return plan_->grid(); }
  const std::shared_ptr<const TransformPlan>& plan() const { return plan_; }
  const ComplexField& density() const { return density_; }

  /// Sampled values; affine part plus transform of the density. Cached.
  const ComplexField& values() const;

  /// Exact discrete d_z^a d_zbar^b. (0,0) returns values(); the affine part
  /// contributes cz at (1,0) and czbar at (0,1) and nothing above.
  ComplexField derivative(int a, int b) const;

  /// Bilinear interpolation of values() at z.
  cdouble value_at(cdouble z) const;

  /// this += alpha * other. Both must share one TransformPlan.
  SolutionField& add_scaled(const SolutionField& other, cdouble alpha);
  SolutionField& add_affine(cdouble c0, cdouble cz, cdouble czbar);
  SolutionField& rescale(cdouble alpha);

  /// W^{k,p} norm fed by the exact derivative algebra.
  double sobolev(const SobolevSpec& sobolev_spec) const;

private:
  SolutionField(std::shared_ptr<const TransformPlan> plan, ComplexField density);

  std::shared_ptr<const TransformPlan> plan_;
  ComplexField density_;
  cdouble c0_{0.0}, cz_{0.0}, czbar_{0.0};
  mutable std::shared_ptr<const ComplexField> values_cache_;
};

/// Outcome of a Neumann-series solve of (d_zbar - mu d_z) u = v.
struct SolveReport {
  SolutionField solution;
  int iterations = 0;
  bool converged = false;
  /// L2 norm of each iteration's update; entry m is also the equation
  /// residual of the iterate before update m.
  std::vector<double> residual_history;
  /// Largest ratio of successive updates from iteration 3 on; bounded by
  /// sup|mu| times the discrete Beurling L2 norm (= 1).
  double contraction_estimate = 0.0;
  /// Certified ||d_zbar u - mu d_z u - v||_2 of the returned solution,
  /// evaluated in the exact derivative algebra.
  double residual = 0.0;
};

/// Throws convergence_error if the report did not converge.
void require_converged(const SolveReport& report, const std::string& what);

/// Neumann iteration h_{m+1} = v + mu T h_m, u = P(h). Stops when the update
/// norm drops below tol * ||v||_2, so the certified residual obeys
/// ||residual|| <= tol * ||v||_2 on convergence.
SolveReport solve_inhomogeneous(const BeltramiCoefficient& mu, const ComplexField& v,
                                double tol = 1e-10, int max_iter = 200,
                                std::shared_ptr<const TransformPlan> plan = nullptr);

/// Canonical quasiconformal solution f = z + P(h) normalized to f(0) = 0 and
/// f(1) = 1 (bilinear interpolation between nodes).
SolveReport canonical_solution(const BeltramiCoefficient& mu, double tol = 1e-10,
                               int max_iter = 200,
                               std::shared_ptr<const TransformPlan> plan = nullptr);

/// Interior-estimate ratio
///   ||u||_{W^{k+1,p}(D_r)} / (||u||_{W^{k,p}(D_R)} + ||v||_{W^{k,p}(D_R)})
/// for a triple satisfying (d_zbar - mu d_z) u = v. Disks are centered on the
/// grid center, 0 < r < R. The equation must hold to relative L2 residual
/// <= 1e-6 (checked with the supplied derivatives; invariant_error otherwise).
/// v derivatives use wirtinger().
double elliptic_ratio(const BeltramiCoefficient& mu, const DerivativeSource& u_derivs,
                      const ComplexField& v, double r, double R, int k, double p);

/// Same with u a plain sampled field, derivatives from wirtinger().
double elliptic_ratio(const BeltramiCoefficient& mu, const ComplexField& u,
                      const ComplexField& v, double r, double R, int k, double p);

/// Closed-form radial stretch f(z) = z psi(|z|): psi = r^alpha inside r0,
/// smoothly capped to the constant r1^alpha outside r1, so f is a scalar
/// multiple of z there and the coefficient is compactly supported. Inside r0
/// the stretch is pure and |mu| = alpha / (2 + alpha) exactly; in the capping
/// band the blend derivative pushes |mu| somewhat higher (about 0.27 for the
/// defaults), still uniformly elliptic.
struct RadialFixture {
  double alpha = 0.4;
  double r0 = 1.0;
  double r1 = 1.4;

  double psi(double r) const;
  double psi_prime(double r) const;
  cdouble value(cdouble z) const;
  cdouble dz(cdouble z) const;
  cdouble dzbar(cdouble z) const;
  cdouble mu(cdouble z) const;
};

/// Log-log slope of the worst-case coefficient gradient for the degenerating
/// family with exponent alpha = 2 - 2/q: at each radius rho the max over 256
/// angles of |(d_z mu, d_zbar mu)| is evaluated from closed forms, then a
/// least-squares line is fitted through (log rho, log max). Tends to -2/q as
/// rho -> 0.
double remark_fixture_slope(double q, std::span<const double> radii);

/// Log-spaced radii where the -2/q asymptote dominates: [1e-3, 1e-1] for
/// moderate q, pushed down to [1e-9, 1e-5] for large q where the angular
/// subleading terms die off only deep in the core.
std::vector<double> remark_default_radii(double q);

} // namespace beltrami
