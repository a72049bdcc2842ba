#include "beltrami/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "beltrami/errors.hpp"

namespace beltrami {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* p;
  explicit FftwBuffer(std::size_t count)
      : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};
} // namespace

struct Fft2D::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft2D::Fft2D(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2) throw config_error("Fft2D: size must be at least 2, got " + std::to_string(n));
  std::size_t count = static_cast<std::size_t>(n) * n;
  FftwBuffer in(count), out(count);
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->fwd = fftw_plan_dft_2d(n, n, in.p, out.p, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_2d(n, n, in.p, out.p, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->bwd) throw error("Fft2D: FFTW plan creation failed");
}

Fft2D::~Fft2D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
}

namespace {
// new-array execution on fftw_malloc'd scratch keeps the alignment contract of
// the original plan regardless of where caller buffers live.
void run(fftw_plan plan, int n, const std::complex<double>* in, std::complex<double>* out) {
  std::size_t count = static_cast<std::size_t>(n) * n;
  FftwBuffer a(count), b(count);
  std::memcpy(a.p, static_cast<const void*>(in), sizeof(fftw_complex) * count);
  fftw_execute_dft(plan, a.p, b.p);
  std::memcpy(static_cast<void*>(out), b.p, sizeof(fftw_complex) * count);
}
} // namespace

void Fft2D::forward(const std::complex<double>* in, std::complex<double>* out) const {
  run(impl_->fwd, n_, in, out);
}

void Fft2D::backward(const std::complex<double>* in, std::complex<double>* out) const {
  run(impl_->bwd, n_, in, out);
}

} // namespace beltrami
