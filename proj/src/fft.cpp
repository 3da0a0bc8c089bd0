#include "nlchns/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <new>

namespace nlchns {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::size_t nreal = 0, nspec = 0;
};

RealFft::RealFft(int rows, int cols) : rows_(rows), cols_(cols), plans_(std::make_unique<Plans>()) {
  plans_->nreal = std::size_t(rows) * cols;
  plans_->nspec = std::size_t(rows) * (cols / 2 + 1);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->real = fftw_alloc_real(plans_->nreal);
  plans_->spec = fftw_alloc_complex(plans_->nspec);
  if (!plans_->real || !plans_->spec) throw std::bad_alloc();
  plans_->fwd = fftw_plan_dft_r2c_2d(rows, cols, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_c2r_2d(rows, cols, plans_->spec, plans_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
  fftw_free(plans_->real);
  fftw_free(plans_->spec);
}

void RealFft::forward(const double* in, Complex* out) {
  std::memcpy(plans_->real, in, plans_->nreal * sizeof(double));
  fftw_execute(plans_->fwd);
  std::memcpy(static_cast<void*>(out), plans_->spec, plans_->nspec * sizeof(fftw_complex));
}

void RealFft::inverse(const Complex* in, double* out) {
  std::memcpy(plans_->spec, static_cast<const void*>(in), plans_->nspec * sizeof(fftw_complex));
  fftw_execute(plans_->inv);
  const double scale = 1.0 / double(plans_->nreal);
  for (std::size_t i = 0; i < plans_->nreal; ++i) out[i] = plans_->real[i] * scale;
}

struct CosineTransform::Plans {
  double* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::size_t n = 0;
};

CosineTransform::CosineTransform(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  plans_->n = std::size_t(n) * n;
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->buf = fftw_alloc_real(plans_->n);
  if (!plans_->buf) throw std::bad_alloc();
  plans_->fwd = fftw_plan_r2r_2d(n, n, plans_->buf, plans_->buf, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_r2r_2d(n, n, plans_->buf, plans_->buf, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
}

CosineTransform::~CosineTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
  fftw_free(plans_->buf);
}

void CosineTransform::forward(const double* in, double* out) {
  std::memcpy(plans_->buf, in, plans_->n * sizeof(double));
  fftw_execute(plans_->fwd);
  std::memcpy(out, plans_->buf, plans_->n * sizeof(double));
}

void CosineTransform::inverse(const double* in, double* out) {
  std::memcpy(plans_->buf, in, plans_->n * sizeof(double));
  fftw_execute(plans_->inv);
  const double scale = 1.0 / (4.0 * double(plans_->n));
  for (std::size_t i = 0; i < plans_->n; ++i) out[i] = plans_->buf[i] * scale;
}

}  // namespace nlchns
