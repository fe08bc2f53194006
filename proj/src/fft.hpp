#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "field.hpp"

namespace litho {

// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
int good_fft_size(int n);

// RAII pair of FFTW real<->complex plans on a fixed (px, py) lattice.
// Plans are created with FFTW_ESTIMATE so results are bitwise reproducible.
// Execution is thread-safe; each caller supplies its own buffers via Workspace.
class RealFft2d {
 public:
  RealFft2d(int px, int py);
  ~RealFft2d();
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  int px() const { return px_; }
  int py() const { return py_; }
  // Number of complex coefficients of the half spectrum.
  std::size_t spectrum_size() const;

  // fftw_malloc'ed scratch buffers sized for this transform.
  class Workspace {
   public:
    explicit Workspace(const RealFft2d& fft);
    ~Workspace();
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    double* real() { return real_; }
    std::complex<double>* spectrum() { return spec_; }

   private:
    double* real_ = nullptr;
    std::complex<double>* spec_ = nullptr;
  };

  // real -> spectrum, unnormalised.
  void forward(Workspace& ws) const;
  // spectrum -> real, unnormalised (caller divides by px*py).
  void inverse(Workspace& ws) const;

 private:
  int px_;
  int py_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// Convolution of fields on a fixed grid with a fixed centred kernel,
// evaluated through zero-padded FFTs. The kernel spectrum is precomputed.
// apply() returns spacing^2 * sum_k f(x - k) kernel(k), i.e. the quadrature of
// the continuous convolution integral.
class Convolver {
 public:
  Convolver(const GridSpec& grid, const ScalarField& kernel);

  ScalarField apply(const ScalarField& f) const;
  // Transpose of apply(): correlation with the kernel.
  ScalarField apply_transpose(const ScalarField& g) const;

  const GridSpec& grid() const { return grid_; }

 private:
  ScalarField run(const ScalarField& f, bool transpose) const;

  GridSpec grid_;
  std::unique_ptr<RealFft2d> fft_;
  std::vector<std::complex<double>> kernel_spectrum_;
};

}  // namespace litho
