#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "errors.hpp"

namespace litho {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

int good_fft_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

struct RealFft2d::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

RealFft2d::RealFft2d(int px, int py) : px_(px), py_(py), plans_(std::make_unique<Plans>()) {
  if (px < 1 || py < 1) throw ConfigError("fft size must be positive");
  Workspace ws(*this);
  std::lock_guard<std::mutex> lock(planner_mutex());
  // Row-major with x fastest: FFTW dims are (py, px).
  plans_->r2c = fftw_plan_dft_r2c_2d(py_, px_, ws.real(), reinterpret_cast<fftw_complex*>(ws.spectrum()),
                                     FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_2d(py_, px_, reinterpret_cast<fftw_complex*>(ws.spectrum()), ws.real(),
                                     FFTW_ESTIMATE);
  if (!plans_->r2c || !plans_->c2r) throw Error("fftw planning failed");
}

RealFft2d::~RealFft2d() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
  if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

std::size_t RealFft2d::spectrum_size() const {
  return static_cast<std::size_t>(py_) * static_cast<std::size_t>(px_ / 2 + 1);
}

RealFft2d::Workspace::Workspace(const RealFft2d& fft) {
  const std::size_t n = static_cast<std::size_t>(fft.px()) * static_cast<std::size_t>(fft.py());
  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  spec_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * fft.spectrum_size()));
  if (!real_ || !spec_) throw ResourceError("fft workspace allocation failed");
}

RealFft2d::Workspace::~Workspace() {
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft2d::forward(Workspace& ws) const {
  fftw_execute_dft_r2c(plans_->r2c, ws.real(), reinterpret_cast<fftw_complex*>(ws.spectrum()));
}

void RealFft2d::inverse(Workspace& ws) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(ws.spectrum()), ws.real());
}

Convolver::Convolver(const GridSpec& grid, const ScalarField& kernel) : grid_(grid) {
  if (kernel.nx() % 2 == 0 || kernel.ny() % 2 == 0)
    throw ConfigError("convolution kernel must have odd dimensions");
  if (std::abs(kernel.spacing() - grid.spacing) > 1e-12 * grid.spacing)
    throw ConfigError("kernel spacing does not match field spacing");
  const int mx = kernel.nx() / 2;
  const int my = kernel.ny() / 2;
  // Offsets beyond the field extent never contribute to outputs on the grid.
  const int ex = std::min(mx, grid.nx - 1);
  const int ey = std::min(my, grid.ny - 1);
  const int px = good_fft_size(grid.nx + ex);
  const int py = good_fft_size(grid.ny + ey);
  fft_ = std::make_unique<RealFft2d>(px, py);

  RealFft2d::Workspace ws(*fft_);
  std::fill(ws.real(), ws.real() + static_cast<std::size_t>(px) * py, 0.0);
  for (int dy = -ey; dy <= ey; ++dy) {
    for (int dx = -ex; dx <= ex; ++dx) {
      const int qx = (dx + px) % px;
      const int qy = (dy + py) % py;
      ws.real()[static_cast<std::size_t>(qy) * px + qx] = kernel(dx + mx, dy + my);
    }
  }
  fft_->forward(ws);
  kernel_spectrum_.assign(ws.spectrum(), ws.spectrum() + fft_->spectrum_size());
}

ScalarField Convolver::apply(const ScalarField& f) const { return run(f, false); }

ScalarField Convolver::apply_transpose(const ScalarField& g) const { return run(g, true); }

ScalarField Convolver::run(const ScalarField& f, bool transpose) const {
  if (f.nx() != grid_.nx || f.ny() != grid_.ny)
    throw ConfigError("field dimensions do not match the convolver grid");
  const int px = fft_->px();
  const int py = fft_->py();
  RealFft2d::Workspace ws(*fft_);
  double* buf = ws.real();
  std::fill(buf, buf + static_cast<std::size_t>(px) * py, 0.0);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) buf[static_cast<std::size_t>(j) * px + i] = f(i, j);
  fft_->forward(ws);
  std::complex<double>* spec = ws.spectrum();
  const std::size_t n = fft_->spectrum_size();
  // Correlation multiplies by the conjugate spectrum (kernel reflected).
  if (transpose) {
    for (std::size_t k = 0; k < n; ++k) spec[k] *= std::conj(kernel_spectrum_[k]);
  } else {
    for (std::size_t k = 0; k < n; ++k) spec[k] *= kernel_spectrum_[k];
  }
  fft_->inverse(ws);
  const double scale = grid_.cell_area() / (static_cast<double>(px) * py);
  ScalarField out(f.grid());
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) out(i, j) = buf[static_cast<std::size_t>(j) * px + i] * scale;
  return out;
}

}  // namespace litho
