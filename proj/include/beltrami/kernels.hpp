#pragma once

#include <complex>
#include <cstddef>

namespace beltrami::kernels {

using cdouble = std::complex<double>;

/// Data-parallel inner loops shared by the transform and solver layers.
///
/// A table of function pointers rather than virtuals: the scalar table is the
/// reference semantics, wider tables (AVX2+FMA today) are drop-in replacements
/// selected once at startup from CPUID. Results may differ from scalar in the
/// last bits (FMA contraction, reduction order), never beyond.
struct Ops {
  const char* name;

  /// out[i] = a[i] * b[i]
  void (*cmul)(const cdouble* a, const cdouble* b, cdouble* out, std::size_t len);
  /// out[i] = a[i] + b[i] * c[i]
  void (*cmul_add)(const cdouble* a, const cdouble* b, const cdouble* c, cdouble* out,
                   std::size_t len);
  /// y[i] += alpha * x[i]
  void (*axpy)(cdouble alpha, const cdouble* x, cdouble* y, std::size_t len);
  /// x[i] *= alpha
  void (*scale)(cdouble alpha, cdouble* x, std::size_t len);
  /// sum of |x[i]|^2
  double (*sum_abs2)(const cdouble* x, std::size_t len);
  /// max of |x[i]|^2
  double (*max_abs2)(const cdouble* x, std::size_t len);
};

/// Portable reference implementation. Always available.
const Ops& scalar_ops();

/// Widest implementation the running CPU supports. Falls back to scalar.
const Ops& active_ops();

/// Name of the table active_ops() returns ("scalar", "avx2").
const char* active_isa();

/// sum of |x[i]|^p for general p > 0. Calls pow per element, so it is kept out
/// of the dispatch table; p == 2 callers should use sum_abs2.
double sum_abs_pow(const cdouble* x, std::size_t len, double p);

} // namespace beltrami::kernels
