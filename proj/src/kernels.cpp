#include "beltrami/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace beltrami::kernels {

namespace {

void cmul_scalar(const cdouble* a, const cdouble* b, cdouble* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = a[i] * b[i];
}

void cmul_add_scalar(const cdouble* a, const cdouble* b, const cdouble* c, cdouble* out,
                     std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = a[i] + b[i] * c[i];
}

void axpy_scalar(cdouble alpha, const cdouble* x, cdouble* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void scale_scalar(cdouble alpha, cdouble* x, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) x[i] *= alpha;
}

double sum_abs2_scalar(const cdouble* x, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

double max_abs2_scalar(const cdouble* x, std::size_t len) {
  double best = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    best = std::max(best, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  }
  return best;
}

constexpr Ops kScalarOps{
    "scalar",         cmul_scalar,     cmul_add_scalar, axpy_scalar,
    scale_scalar,     sum_abs2_scalar, max_abs2_scalar,
};

} // namespace

const Ops& scalar_ops() { return kScalarOps; }

#if defined(BELTRAMI_HAVE_AVX2_TU)
// Defined in kernels_avx2.cpp, compiled with -mavx2 -mfma.
const Ops* avx2_ops_if_supported();
#endif

const Ops& active_ops() {
  static const Ops* table = [] {
#if defined(BELTRAMI_HAVE_AVX2_TU)
    if (const Ops* t = avx2_ops_if_supported()) return t;
#endif
    return &kScalarOps;
  }();
  return *table;
}

const char* active_isa() { return active_ops().name; }

double sum_abs_pow(const cdouble* x, std::size_t len, double p) {
  if (p == 2.0) return active_ops().sum_abs2(x, len);
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += std::pow(std::abs(x[i]), p);
  return acc;
}

} // namespace beltrami::kernels
