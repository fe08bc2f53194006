#pragma once

#include <functional>
#include <string>
#include <vector>

#include "field.hpp"

namespace litho {

// C-infinity step: 1 on (-inf, 0], 0 on [1, inf), nonincreasing.
// phi(t) = e(1 - t) / (e(t) + e(1 - t)) with e(t) = exp(-1/t) for t > 0, else 0.
double smooth_cutoff(double t);
double smooth_cutoff_derivative(double t);

// Approximate Heaviside: 0 for t <= -1/2, 1 for t >= 1/2, nondecreasing.
double smooth_heaviside(double t);
double smooth_heaviside_derivative(double t);

using RadialFunction = std::function<double(double)>;

// Uniformly tabulated radial profile f(r), r = k*dr. Evaluation uses cubic
// Catmull-Rom interpolation with even reflection at r = 0 and returns zero past
// the last sample.
struct RadialProfile {
  double dr = 1.0;
  std::vector<double> values;

  double operator()(double r) const;
  double max_radius() const { return values.empty() ? 0.0 : dr * static_cast<double>(values.size() - 1); }
  static RadialProfile tabulate(const RadialFunction& f, double dr, double r_max);
};

// 2*pi * int_0^inf r J0(k r) f(r) dr at k = j*dk, j < n, by the trapezoidal
// rule on the samples of f. For a radial f on R^2 this is its 2D Fourier
// transform as a function of |xi|.
RadialProfile hankel0(const RadialProfile& f, double dk, std::size_t n);

enum class KernelKind { gaussian, jinc, smoothed_psf, mutual_intensity };

std::string to_string(KernelKind kind);

// A radial kernel sampled on a centred (2m+1)^2 lattice.
struct SampledKernel {
  KernelKind kind = KernelKind::gaussian;
  RadialFunction spatial;  // exact radial profile
  RadialFunction fourier;  // radial profile of the Fourier transform
  double support = 0.0;    // sampled radius, model units
  ScalarField grid;        // samples; centre sample is offset zero
  RadialProfile profile;   // tabulated spatial profile on [0, support]
  double mass = 0.0;       // spacing^2 * sum of samples
  double l1_norm = 0.0;    // spacing^2 * sum of |samples|
  double tail = 0.0;       // max |profile| on the outer 5% of the support, relative to |profile(0)|

  int half_width() const { return grid.nx() / 2; }
  double spacing() const { return grid.spacing(); }
  double at_offset(int dx, int dy) const { return grid(dx + half_width(), dy + half_width()); }
};

SampledKernel sample_radial_kernel(KernelKind kind, RadialFunction spatial, RadialFunction fourier, double spacing,
                                   double support);

// Gaussian G(x) = exp(-|x|^2 / (2 std^2)) / (2 pi std^2). Throws
// TruncationError when support < 8 std.
SampledKernel gaussian(double spacing, double support, double std_dev = 1.0);

// Jinc(x) = J1(|x|) / (2 pi |x|), Jinc(0) = 1 / (4 pi). Its transform is the
// indicator of the unit disk.
SampledKernel jinc(double spacing, double support);

// J(x) = 2 J1(a|x|) / (a|x|), J(0) = 1, with a = k * sigma * NA.
SampledKernel mutual_intensity(double k_sigma_na, double spacing, double support);

// f_s(x) = s^-2 f(x / s), resampled on the same spacing with support scaled by s.
SampledKernel rescale_kernel(const SampledKernel& f, double s);

// Convolution with a sampled kernel on f's grid. Throws TruncationError when the
// kernel has not decayed (tail > 1e-8) yet is cut off inside the field extent.
ScalarField convolve(const ScalarField& f, const SampledKernel& k);

// ---------------------------------------------------------------------------
// Smoothed point-spread function T with T^ == 1 on B_{s0} and
// ||T - G||_{W^{1,1}} <= delta_tilde.

struct PsfSearchBudget {
  int s0_halvings = 5;  // s0 in {1, 1/2, ..., 2^-s0_halvings}
  int b0_doublings = 2; // b0 in {2, 4, ..., 2^(1+b0_doublings)}
};

struct SmoothedPsf {
  double delta_tilde = 0.05;
  double s0 = 1.0;
  double b0 = 2.0;
  double b = 2.0;                  // b0 / s0
  double deviation = 0.0;          // ||T - G||_{W^{1,1}}
  double deviation_scaled = 0.0;   // ||T_{s0} - G_{s0}||_{W^{1,1}}
  double l1_norm = 1.0;            // ||T||_{L^1}
  int candidates_tried = 0;
  RadialProfile profile;           // T(r), natural units (G has unit variance)
  std::function<double(double)> cutoff;

  double spatial(double r) const { return profile(r); }
  // T^(rho), natural units.
  double fourier(double rho) const;
};

SmoothedPsf build_smoothed_psf(double delta_tilde, std::function<double(double)> cutoff = smooth_cutoff,
                               PsfSearchBudget budget = {});

// Evaluates one (s0, b0) candidate without searching.
SmoothedPsf evaluate_smoothed_psf(double s0, double b0, std::function<double(double)> cutoff = smooth_cutoff);

// K = T_scale sampled on `spacing` out to `support`.
SampledKernel sample_psf(const SmoothedPsf& psf, double scale, double spacing, double support);

}  // namespace litho
