#include "beltrami/transforms.hpp"

#include <cmath>

#include "beltrami/families.hpp"
#include "beltrami/kernels.hpp"

namespace beltrami {

TransformPlan::TransformPlan(GridSpec grid, int pf)
    : grid_(grid), pf_(pf), np_(pf * grid.n), fft_(std::make_shared<Fft2D>(np_)) {
  double length = 2.0 * grid_.half_width * pf_;
  freq_.resize(np_);
  for (int k = 0; k < np_; ++k) {
    int f = k < np_ / 2 ? k : k - np_;
    freq_[k] = f / length;
  }
}

std::shared_ptr<const TransformPlan> TransformPlan::make(const GridSpec& grid,
                                                         int padding_factor) {
  GridSpec::make(grid.n, grid.center, grid.half_width); // revalidate
  if (padding_factor != 1 && padding_factor != 2 && padding_factor != 4) {
    throw config_error("TransformPlan: padding_factor must be 1, 2 or 4, got " +
                       std::to_string(padding_factor));
  }
  return std::shared_ptr<const TransformPlan>(new TransformPlan(grid, padding_factor));
}

std::vector<cdouble> TransformPlan::pad(const ComplexField& u) const {
  if (!(u.spec() == grid_)) throw invariant_error("TransformPlan: field grid mismatch");
  std::vector<cdouble> out(static_cast<std::size_t>(np_) * np_);
  int off = (np_ - grid_.n) / 2;
  for (int i = 0; i < grid_.n; ++i) {
    const cdouble* src = u.data() + static_cast<std::size_t>(i) * grid_.n;
    cdouble* dst = out.data() + static_cast<std::size_t>(i + off) * np_ + off;
    std::copy(src, src + grid_.n, dst);
  }
  return out;
}

ComplexField TransformPlan::crop(const std::vector<cdouble>& padded) const {
  ComplexField out = ComplexField::zeros(grid_);
  int off = (np_ - grid_.n) / 2;
  for (int i = 0; i < grid_.n; ++i) {
    const cdouble* src = padded.data() + static_cast<std::size_t>(i + off) * np_ + off;
    std::copy(src, src + grid_.n, out.data() + static_cast<std::size_t>(i) * grid_.n);
  }
  return out;
}

std::vector<cdouble> TransformPlan::apply_padded(const ComplexField& u, Multiplier kind,
                                                 int a, int b) const {
  if (a < 0 || b < 0 || a + b > 5) {
    throw config_error("TransformPlan: derivative orders must be nonnegative with a + b <= 5");
  }
  std::vector<cdouble> buf = pad(u);
  std::vector<cdouble> hat(buf.size());
  fft_->forward(buf.data(), hat.data());

  const cdouble pii(0.0, M_PI);
  double inv_count = 1.0 / (static_cast<double>(np_) * np_);
  for (int ki = 0; ki < np_; ++ki) {
    double xi1 = freq_[ki];
    for (int kj = 0; kj < np_; ++kj) {
      double xi2 = freq_[kj];
      std::size_t idx = static_cast<std::size_t>(ki) * np_ + kj;
      if (xi1 == 0.0 && xi2 == 0.0) {
        // the zero mode: identity keeps it, every singular symbol and every
        // derivative drops it
        hat[idx] *= (kind == Multiplier::identity && a == 0 && b == 0) ? inv_count : 0.0;
        continue;
      }
      cdouble zeta(xi1, xi2);
      cdouble sym(inv_count, 0.0);
      switch (kind) {
        case Multiplier::identity:
          break;
        case Multiplier::beurling:
          sym *= std::conj(zeta) / zeta;
          break;
        case Multiplier::cauchy:
          sym *= 1.0 / (pii * zeta);
          break;
      }
      for (int q = 0; q < a; ++q) sym *= pii * std::conj(zeta);
      for (int q = 0; q < b; ++q) sym *= pii * zeta;
      hat[idx] *= sym;
    }
  }
  fft_->backward(hat.data(), buf.data());
  return buf;
}

ComplexField TransformPlan::apply(const ComplexField& u, Multiplier kind, int a,
                                  int b) const {
  return crop(apply_padded(u, kind, a, b));
}

cdouble TransformPlan::padded_mean(const ComplexField& u) const {
  if (!(u.spec() == grid_)) throw invariant_error("TransformPlan: field grid mismatch");
  cdouble sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u.data()[i];
  return sum / (static_cast<double>(np_) * np_);
}

double TransformPlan::padded_l2_norm(std::span<const cdouble> padded) const {
  double h2 = grid_.spacing() * grid_.spacing();
  return std::sqrt(kernels::active_ops().sum_abs2(padded.data(), padded.size()) * h2);
}

double TransformPlan::padded_lp_norm(std::span<const cdouble> padded, double p) const {
  double h2 = grid_.spacing() * grid_.spacing();
  return std::pow(kernels::sum_abs_pow(padded.data(), padded.size(), p) * h2, 1.0 / p);
}

namespace {

TransformStats support_stats(const TransformPlan& plan, const ComplexField& u) {
  // central half of the padded square, in node-index form so the comparison
  // is exact: |i - n/2| > pf * n / 4
  const GridSpec& g = plan.grid();
  int bound = plan.padding_factor() * g.n / 4;
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i) {
    bool row_out = std::abs(i - g.n / 2) > bound;
    for (int j = 0; j < g.n; ++j) {
      if (row_out || std::abs(j - g.n / 2) > bound) {
        worst = std::max(worst, std::abs(u.at(i, j)));
      }
    }
  }
  return TransformStats{worst <= 1e-13, worst};
}

} // namespace

ComplexField beurling(const TransformPlan& plan, const ComplexField& u,
                      TransformStats* stats) {
  if (stats) *stats = support_stats(plan, u);
  return plan.apply(u, TransformPlan::Multiplier::beurling);
}

ComplexField cauchy(const TransformPlan& plan, const ComplexField& u, TransformStats* stats) {
  if (stats) *stats = support_stats(plan, u);
  ComplexField out = plan.apply(u, TransformPlan::Multiplier::cauchy);
  auto [i0, j0] = node_nearest_zero(plan.grid());
  cdouble pin = out.at(i0, j0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) out.data()[idx] -= pin;
  return out;
}

std::vector<cdouble> beurling_quadrature(const ComplexField& u,
                                         std::span<const cdouble> pts) {
  const GridSpec& spec = u.spec();
  double h = spec.spacing();
  double w = -h * h / M_PI;
  double skip2 = 0.25 * h * h;
  std::vector<cdouble> out;
  out.reserve(pts.size());
  for (cdouble z : pts) {
    cdouble acc = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        const cdouble& v = u.at(i, j);
        if (v == cdouble(0.0)) continue;
        cdouble d = spec.node(i, j) - z;
        if (std::norm(d) <= skip2) continue; // singular cell, principal value
        acc += v / (d * d);
      }
    }
    out.push_back(acc * w);
  }
  return out;
}

std::vector<cdouble> cauchy_quadrature(const ComplexField& u, std::span<const cdouble> pts) {
  const GridSpec& spec = u.spec();
  double h = spec.spacing();
  double w = -h * h / M_PI;
  double skip2 = 0.25 * h * h;
  std::vector<cdouble> out;
  out.reserve(pts.size());
  for (cdouble z : pts) {
    cdouble acc = 0.0;
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        const cdouble& v = u.at(i, j);
        if (v == cdouble(0.0)) continue;
        cdouble zeta = spec.node(i, j);
        cdouble d = zeta - z;
        if (std::norm(d) > skip2) acc += v / d;
        if (std::norm(zeta) > skip2) acc -= v / zeta;
      }
    }
    out.push_back(acc * w);
  }
  return out;
}

NormProbeReport beurling_norm_probe(const TransformPlan& plan, double p, int trials,
                                    std::uint64_t seed) {
  if (!std::isfinite(p) || p < 1.0) {
    throw config_error("beurling_norm_probe: p must be finite and >= 1");
  }
  if (trials < 10) throw config_error("beurling_norm_probe: need at least 10 trials");
  const GridSpec& g = plan.grid();
  NormProbeReport report;

  auto measure = [&](const ComplexField& raw) {
    ComplexField u = make_mean_free(raw);
    double in = lp_norm(u, p);
    if (in == 0.0) return;
    std::vector<cdouble> out =
        plan.apply_padded(u, TransformPlan::Multiplier::beurling);
    report.ratios.push_back(plan.padded_lp_norm(out, p) / in);
  };

  BumpSampler sampler(seed);
  for (int t = 0; t < trials; ++t) {
    measure(sample_bump(g, sampler.next(g)));
  }

  // capped power-law candidates with angular modes; these, not smooth bumps,
  // are what pushes the L^p ratio above 1 for p != 2
  double hw = g.half_width;
  double h = g.spacing();
  for (double gamma : {0.35, 0.5, 0.65}) {
    for (int k : {1, 2}) {
      ComplexField cand = sample_function(g, [&](cdouble z) -> cdouble {
        cdouble rel = z - g.center;
        double r = std::abs(rel);
        if (r < 2.0 * h) return 0.0;
        double cap = falloff((r - 0.35 * hw) / (0.1375 * hw));
        if (cap == 0.0) return 0.0;
        double theta = std::arg(rel);
        return std::pow(r + 1e-6, -gamma) * cap *
               cdouble(std::cos(k * theta), std::sin(k * theta));
      });
      measure(cand);
    }
  }

  for (double r : report.ratios) report.max_ratio = std::max(report.max_ratio, r);
  return report;
}

} // namespace beltrami
