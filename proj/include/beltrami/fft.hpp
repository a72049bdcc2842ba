#pragma once

#include <complex>
#include <memory>

namespace beltrami {

/// Two-dimensional complex-to-complex FFT of a fixed square size, backed by
/// FFTW. Plans are created with FFTW_ESTIMATE so results are identical from
/// run to run (FFTW_MEASURE picks algorithms by wall clock). Plan creation is
/// serialized on a global mutex; execution is const and thread-safe, each call
/// runs on private FFTW-aligned scratch.
class Fft2D {
public:
  explicit Fft2D(int n);
  ~Fft2D();

  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int size() const { return n_; }

  /// out[k] = sum_j in[j] e^{-2 pi i jk/n}, unnormalized, row-major n x n.
  void forward(const std::complex<double>* in, std::complex<double>* out) const;

  /// Unnormalized inverse; callers divide by n*n to invert forward().
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

private:
  struct Impl;
  int n_;
  std::unique_ptr<Impl> impl_;
};

} // namespace beltrami
