// AVX2 + FMA variants of the kernel table. This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatch in kernels.cpp, never directly.

#include "beltrami/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace beltrami::kernels {

namespace {

// Complex product of two interleaved [re, im] pairs per 256-bit vector.
// even lanes: ar*br - ai*bi, odd lanes: ar*bi + ai*br.
inline __m256d cmul2(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);
  __m256d b_im = _mm256_permute_pd(b, 0xF);
  __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void cmul_avx2(const cdouble* a, const cdouble* b, cdouble* out, std::size_t len) {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul2(va, vb));
  }
  for (; i < len; ++i) out[i] = a[i] * b[i];
}

void cmul_add_avx2(const cdouble* a, const cdouble* b, const cdouble* c, cdouble* out,
                   std::size_t len) {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    __m256d vc = _mm256_loadu_pd(reinterpret_cast<const double*>(c + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), _mm256_add_pd(va, cmul2(vb, vc)));
  }
  for (; i < len; ++i) out[i] = a[i] + b[i] * c[i];
}

void axpy_avx2(cdouble alpha, const cdouble* x, cdouble* y, std::size_t len) {
  __m256d al = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i), _mm256_add_pd(vy, cmul2(al, vx)));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

void scale_avx2(cdouble alpha, cdouble* x, std::size_t len) {
  __m256d al = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(x + i), cmul2(al, vx));
  }
  for (; i < len; ++i) x[i] *= alpha;
}

double sum_abs2_avx2(const cdouble* x, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    acc = _mm256_fmadd_pd(vx, vx, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < len; ++i) {
    total += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return total;
}

double max_abs2_avx2(const cdouble* x, std::size_t len) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d sq = _mm256_mul_pd(vx, vx);
    // hadd pairs re^2+im^2 within each 128-bit half; duplicates are harmless under max.
    best = _mm256_max_pd(best, _mm256_hadd_pd(sq, sq));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double total = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < len; ++i) {
    total = std::max(total, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  }
  return total;
}

constexpr Ops kAvx2Ops{
    "avx2",     cmul_avx2,     cmul_add_avx2, axpy_avx2,
    scale_avx2, sum_abs2_avx2, max_abs2_avx2,
};

} // namespace

const Ops* avx2_ops_if_supported() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Ops;
  return nullptr;
}

} // namespace beltrami::kernels
