#include "beltrami/solver.hpp"

#include <cmath>

#include "beltrami/families.hpp"
#include "beltrami/kernels.hpp"

namespace beltrami {

BeltramiCoefficient BeltramiCoefficient::from_field(ComplexField field,
                                                    bool require_contractive) {
  const GridSpec& spec = field.spec();
  double sup = sup_norm(field);
  if (!std::isfinite(sup)) {
    throw config_error("BeltramiCoefficient: field contains non-finite samples");
  }
  if (require_contractive && sup >= 1.0) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", sup);
    throw config_error(std::string("BeltramiCoefficient: sup |mu| = ") + buf +
                       " is not uniformly elliptic (need < 1)");
  }
  double support = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      if (std::abs(field.at(i, j)) > 1e-13) {
        support = std::max(support, std::abs(spec.node(i, j) - spec.center));
      }
    }
  }
  if (support > spec.half_width / 2.0) {
    throw invariant_error("BeltramiCoefficient: support radius " + std::to_string(support) +
                          " exceeds half the grid half_width; periodization is uncontrolled");
  }
  return BeltramiCoefficient(std::move(field), sup, support);
}

SolutionField::SolutionField(std::shared_ptr<const TransformPlan> plan, ComplexField density)
    : plan_(std::move(plan)), density_(std::move(density)) {}

SolutionField SolutionField::cauchy_of(ComplexField density,
                                       std::shared_ptr<const TransformPlan> plan) {
  if (!plan) throw config_error("SolutionField::cauchy_of: plan is required");
  if (!(density.spec() == plan->grid())) {
    throw invariant_error("SolutionField::cauchy_of: density grid does not match plan");
  }
  cdouble mean = plan->padded_mean(density);
  ComplexField raw = plan->apply(density, TransformPlan::Multiplier::cauchy);
  SolutionField out(plan, std::move(density));
  out.czbar_ = mean;

  const GridSpec& spec = plan->grid();
  auto [i0, j0] = node_nearest_zero(spec);
  cdouble z0 = spec.node(i0, j0);
  out.c0_ = -(raw.at(i0, j0) + mean * std::conj(z0));

  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      cdouble z = spec.node(i, j);
      raw.at(i, j) += out.c0_ + mean * std::conj(z);
    }
  }
  out.values_cache_ = std::make_shared<const ComplexField>(std::move(raw));
  return out;
}

SolutionField SolutionField::zero(std::shared_ptr<const TransformPlan> plan) {
  if (!plan) throw config_error("SolutionField::zero: plan is required");
  GridSpec spec = plan->grid();
  SolutionField out(std::move(plan), ComplexField::zeros(spec));
  return out;
}

const ComplexField& SolutionField::values() const {
  if (!values_cache_) {
    ComplexField raw = plan_->apply(density_, TransformPlan::Multiplier::cauchy);
    const GridSpec& spec = plan_->grid();
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        cdouble z = spec.node(i, j);
        raw.at(i, j) += c0_ + cz_ * z + czbar_ * std::conj(z);
      }
    }
    values_cache_ = std::make_shared<const ComplexField>(std::move(raw));
  }
  return *values_cache_;
}

ComplexField SolutionField::derivative(int a, int b) const {
  if (a == 0 && b == 0) return values();
  ComplexField out = plan_->apply(density_, TransformPlan::Multiplier::cauchy, a, b);
  cdouble affine = 0.0;
  if (a == 1 && b == 0) affine = cz_;
  if (a == 0 && b == 1) affine = czbar_;
  if (affine != cdouble(0.0)) {
    for (std::size_t idx = 0; idx < out.size(); ++idx) out.data()[idx] += affine;
  }
  return out;
}

cdouble SolutionField::value_at(cdouble z) const { return beltrami::value_at(values(), z); }

SolutionField& SolutionField::add_scaled(const SolutionField& other, cdouble alpha) {
  if (plan_ != other.plan_) {
    throw invariant_error("SolutionField::add_scaled: fields must share a TransformPlan");
  }
  density_.add_scaled(other.density_, alpha);
  c0_ += alpha * other.c0_;
  cz_ += alpha * other.cz_;
  czbar_ += alpha * other.czbar_;
  if (values_cache_ && other.values_cache_) {
    auto merged = std::make_shared<ComplexField>(*values_cache_);
    merged->add_scaled(*other.values_cache_, alpha);
    values_cache_ = std::move(merged);
  } else {
    values_cache_.reset();
  }
  return *this;
}

SolutionField& SolutionField::add_affine(cdouble c0, cdouble cz, cdouble czbar) {
  c0_ += c0;
  cz_ += cz;
  czbar_ += czbar;
  if (values_cache_) {
    auto updated = std::make_shared<ComplexField>(*values_cache_);
    const GridSpec& spec = plan_->grid();
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        cdouble z = spec.node(i, j);
        updated->at(i, j) += c0 + cz * z + czbar * std::conj(z);
      }
    }
    values_cache_ = std::move(updated);
  }
  return *this;
}

SolutionField& SolutionField::rescale(cdouble alpha) {
  density_ *= alpha;
  c0_ *= alpha;
  cz_ *= alpha;
  czbar_ *= alpha;
  if (values_cache_) {
    auto updated = std::make_shared<ComplexField>(*values_cache_);
    *updated *= alpha;
    values_cache_ = std::move(updated);
  }
  return *this;
}

double SolutionField::sobolev(const SobolevSpec& sobolev_spec) const {
  return sobolev_norm([this](int a, int b) { return derivative(a, b); }, grid(),
                      sobolev_spec);
}

void require_converged(const SolveReport& report, const std::string& what) {
  if (!report.converged) {
    throw convergence_error(what + ": Neumann iteration did not reach tolerance in " +
                            std::to_string(report.iterations) + " iterations");
  }
}

namespace {

struct DensitySolve {
  ComplexField h;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
  double contraction = 0.0;
  double residual = 0.0;
};

DensitySolve solve_density(const BeltramiCoefficient& mu, const ComplexField& v, double tol,
                           int max_iter, const TransformPlan& plan) {
  if (!(v.spec() == mu.grid())) {
    throw invariant_error("solve: v and mu grids differ");
  }
  if (!std::isfinite(tol) || tol <= 0.0) throw config_error("solve: tol must be positive");
  if (max_iter < 1) throw config_error("solve: max_iter must be positive");

  const auto& ops = kernels::active_ops();
  double v_norm = lp_norm(v, 2.0);
  DensitySolve out{v, 0, false, {}, 0.0, 0.0};

  ComplexField diff = ComplexField::zeros(v.spec());
  double h2 = v.spec().spacing() * v.spec().spacing();
  for (int m = 1; m <= max_iter; ++m) {
    ComplexField th = plan.apply(out.h, TransformPlan::Multiplier::beurling);
    ComplexField next = ComplexField::zeros(v.spec());
    ops.cmul_add(v.data(), mu.field().data(), th.data(), next.data(), next.size());
    // diff = next - h; its norm is both the update size and the equation
    // residual of the previous iterate
    std::copy(next.data(), next.data() + next.size(), diff.data());
    ops.axpy(-1.0, out.h.data(), diff.data(), diff.size());
    double delta = std::sqrt(ops.sum_abs2(diff.data(), diff.size()) * h2);
    out.history.push_back(delta);
    out.h = std::move(next);
    out.iterations = m;
    if (delta <= tol * v_norm) {
      out.converged = true;
      break;
    }
  }

  for (std::size_t i = 2; i < out.history.size(); ++i) {
    if (out.history[i - 1] > 0.0) {
      out.contraction = std::max(out.contraction, out.history[i] / out.history[i - 1]);
    }
  }

  ComplexField th = plan.apply(out.h, TransformPlan::Multiplier::beurling);
  ComplexField res = ComplexField::zeros(v.spec());
  ops.cmul_add(v.data(), mu.field().data(), th.data(), res.data(), res.size());
  ops.axpy(-1.0, out.h.data(), res.data(), res.size());
  out.residual = std::sqrt(ops.sum_abs2(res.data(), res.size()) * h2);
  return out;
}

std::shared_ptr<const TransformPlan> ensure_plan(const GridSpec& grid,
                                                 std::shared_ptr<const TransformPlan> plan) {
  if (!plan) return TransformPlan::make(grid, 2);
  if (!(plan->grid() == grid)) throw invariant_error("solve: plan grid does not match mu");
  return plan;
}

} // namespace

SolveReport solve_inhomogeneous(const BeltramiCoefficient& mu, const ComplexField& v,
                                double tol, int max_iter,
                                std::shared_ptr<const TransformPlan> plan) {
  plan = ensure_plan(mu.grid(), std::move(plan));
  DensitySolve d = solve_density(mu, v, tol, max_iter, *plan);
  SolveReport report{SolutionField::cauchy_of(std::move(d.h), plan),
                     d.iterations,
                     d.converged,
                     std::move(d.history),
                     d.contraction,
                     d.residual};
  return report;
}

SolveReport canonical_solution(const BeltramiCoefficient& mu, double tol, int max_iter,
                               std::shared_ptr<const TransformPlan> plan) {
  plan = ensure_plan(mu.grid(), std::move(plan));
  DensitySolve d = solve_density(mu, mu.field(), tol, max_iter, *plan);
  double raw_residual = d.residual;
  SolutionField f = SolutionField::cauchy_of(std::move(d.h), plan);
  f.add_affine(0.0, 1.0, 0.0);
  f.add_affine(-f.value_at(0.0), 0.0, 0.0);
  cdouble norm = f.value_at(cdouble(1.0, 0.0));
  if (std::abs(norm) < 1e-8) {
    throw invariant_error("canonical_solution: normalization value f_raw(1) is degenerate");
  }
  f.rescale(1.0 / norm);
  SolveReport report{std::move(f), d.iterations,          d.converged,
                     std::move(d.history), d.contraction, raw_residual / std::abs(norm)};
  return report;
}

namespace {

double source_sobolev(const DerivativeSource& derivs, const GridSpec& spec, int k, double p,
                      const DiskRegion& region) {
  return sobolev_norm(derivs, spec, SobolevSpec::make(k, p, region));
}

} // namespace

double elliptic_ratio(const BeltramiCoefficient& mu, const DerivativeSource& u_derivs,
                      const ComplexField& v, double r, double R, int k, double p) {
  const GridSpec& spec = mu.grid();
  if (!(v.spec() == spec)) throw invariant_error("elliptic_ratio: v grid does not match mu");
  if (!(r > 0.0) || !(R > r)) throw config_error("elliptic_ratio: need 0 < r < R");
  if (k < 0 || k > 3) throw config_error("elliptic_ratio: k must be in [0, 3]");

  // the triple must actually satisfy the equation; a ratio for an
  // inconsistent triple would measure nothing
  ComplexField feq = u_derivs(0, 1);
  feq -= pointwise_multiply(mu.field(), u_derivs(1, 0));
  feq -= v;
  double v_norm = lp_norm(v, 2.0);
  if (v_norm == 0.0) throw invariant_error("elliptic_ratio: v vanishes identically");
  double rel = lp_norm(feq, 2.0) / v_norm;
  if (rel > 1e-6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", rel);
    throw invariant_error(std::string("elliptic_ratio: (mu, u, v) violate the equation, "
                                      "relative residual ") +
                          buf);
  }

  DiskRegion inner = DiskRegion::make(spec.center, r);
  DiskRegion outer = DiskRegion::make(spec.center, R);
  double num = source_sobolev(u_derivs, spec, k + 1, p, inner);
  double den = source_sobolev(u_derivs, spec, k, p, outer) +
               sobolev_norm(v, SobolevSpec::make(k, p, outer));
  if (den == 0.0) throw invariant_error("elliptic_ratio: denominator vanished");
  return num / den;
}

double elliptic_ratio(const BeltramiCoefficient& mu, const ComplexField& u,
                      const ComplexField& v, double r, double R, int k, double p) {
  return elliptic_ratio(
      mu, [&u](int a, int b) { return wirtinger(u, a, b); }, v, r, R, k, p);
}

double RadialFixture::psi(double r) const {
  if (r <= 0.0) return 0.0;
  double s = falloff((r - r0) / (r1 - r0));
  double cap = std::pow(r1, alpha);
  if (s == 0.0) return cap;
  return std::pow(r, alpha) * s + cap * (1.0 - s);
}

double RadialFixture::psi_prime(double r) const {
  if (r <= 0.0) return 0.0;
  double t = (r - r0) / (r1 - r0);
  double s = falloff(t);
  double sp = falloff_prime(t) / (r1 - r0);
  double cap = std::pow(r1, alpha);
  return alpha * std::pow(r, alpha - 1.0) * s + (std::pow(r, alpha) - cap) * sp;
}

cdouble RadialFixture::value(cdouble z) const { return z * psi(std::abs(z)); }

cdouble RadialFixture::dz(cdouble z) const {
  double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return psi(r) + 0.5 * r * psi_prime(r);
}

cdouble RadialFixture::dzbar(cdouble z) const {
  double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return z * z * psi_prime(r) / (2.0 * r);
}

cdouble RadialFixture::mu(cdouble z) const {
  double r = std::abs(z);
  if (r == 0.0) return 0.0;
  cdouble d = dz(z);
  if (d == cdouble(0.0)) return 0.0;
  return dzbar(z) / d;
}

double remark_fixture_slope(double q, std::span<const double> radii) {
  if (!(q > 2.0)) throw config_error("remark_fixture_slope: q must be > 2");
  if (radii.size() < 2) throw config_error("remark_fixture_slope: need at least 2 radii");
  double alpha = 2.0 - 2.0 / q;
  std::vector<double> lx, ly;
  for (double rho : radii) {
    if (!(rho > 0.0)) throw config_error("remark_fixture_slope: radii must be positive");
    double big_a = 0.5 * alpha * std::pow(rho, alpha - 2.0);
    double best = 0.0;
    for (int t = 0; t < 256; ++t) {
      double th = 2.0 * M_PI * t / 256.0;
      cdouble z = rho * cdouble(std::cos(th), std::sin(th));
      cdouble zb = std::conj(z);
      cdouble denom = 1.0 + big_a * zb;
      denom *= denom;
      cdouble az = big_a * (0.5 * alpha + big_a * zb) / denom;
      cdouble azb = big_a * z * ((alpha - 2.0) / (2.0 * zb) - big_a) / denom;
      best = std::max(best, std::sqrt(std::norm(az) + std::norm(azb)));
    }
    lx.push_back(std::log(rho));
    ly.push_back(std::log(best));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

std::vector<double> remark_default_radii(double q) {
  // window where the -2/q power dominates the angular subleading terms
  double lo = q <= 10.0 ? 1.0 : 5.0;
  double hi = q <= 10.0 ? 3.0 : 9.0;
  std::vector<double> out;
  for (int i = 0; i < 7; ++i) {
    double e = lo + (hi - lo) * i / 6.0;
    out.push_back(std::pow(10.0, -e));
  }
  return out;
}

} // namespace beltrami
