#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace litho {

namespace {

constexpr double kPi = std::numbers::pi;

double bump_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// glibc's j0/j1 are two orders of magnitude faster than std::cyl_bessel_j,
// which matters for the PSF quadrature.
double bessel_j0(double x) { return ::j0(x); }
double bessel_j1(double x) { return ::j1(x); }

}  // namespace

double smooth_cutoff(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = bump_exp(t);
  const double c = bump_exp(1.0 - t);
  return c / (a + c);
}

double smooth_cutoff_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = bump_exp(t);
  const double c = bump_exp(1.0 - t);
  const double s = a + c;
  return -a * c * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / (s * s);
}

double smooth_heaviside(double t) { return smooth_cutoff(0.5 - t); }
double smooth_heaviside_derivative(double t) { return -smooth_cutoff_derivative(0.5 - t); }

double RadialProfile::operator()(double r) const {
  r = std::abs(r);
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  const double x = r / dr;
  if (x > static_cast<double>(n - 1)) return 0.0;
  const auto k = static_cast<long>(std::floor(x));
  const double t = x - static_cast<double>(k);
  auto at = [&](long m) {
    if (m < 0) m = -m;  // even extension
    if (m > static_cast<long>(n - 1)) m = static_cast<long>(n - 1);
    return values[static_cast<std::size_t>(m)];
  };
  const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

RadialProfile RadialProfile::tabulate(const RadialFunction& f, double dr, double r_max) {
  RadialProfile p;
  p.dr = dr;
  const auto n = static_cast<std::size_t>(std::floor(r_max / dr + 1e-9)) + 1;
  p.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) p.values[k] = f(dr * static_cast<double>(k));
  return p;
}

RadialProfile hankel0(const RadialProfile& f, double dk, std::size_t n) {
  RadialProfile out;
  out.dr = dk;
  out.values.assign(n, 0.0);
  const std::size_t m = f.values.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double k = dk * static_cast<double>(j);
    double s = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
      const double r = f.dr * static_cast<double>(i);
      const double w = (i + 1 == m) ? 0.5 : 1.0;
      s += w * r * bessel_j0(k * r) * f.values[i];
    }
    out.values[j] = 2.0 * kPi * s * f.dr;
  }
  return out;
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::jinc: return "jinc";
    case KernelKind::smoothed_psf: return "smoothed_psf";
    case KernelKind::mutual_intensity: return "mutual_intensity";
  }
  return "unknown";
}

SampledKernel sample_radial_kernel(KernelKind kind, RadialFunction spatial, RadialFunction fourier, double spacing,
                                   double support) {
  if (!(spacing > 0.0) || !(support > 0.0)) throw DomainError("kernel spacing and support must be positive");
  SampledKernel k;
  k.kind = kind;
  k.spatial = std::move(spatial);
  k.fourier = std::move(fourier);
  k.support = support;
  const int m = std::max(1, static_cast<int>(std::floor(support / spacing + 1e-9)));
  GridSpec g{2 * m + 1, 2 * m + 1, spacing, -m * spacing, -m * spacing};
  k.grid = ScalarField(g);
  // Samples only depend on dx^2 + dy^2; evaluate each distinct radius once.
  std::vector<double> by_r2(static_cast<std::size_t>(2 * m * m) + 1, std::nan(""));
  const double cut2 = (support / spacing) * (support / spacing) * (1.0 + 1e-12);
  double sum = 0.0, abs_sum = 0.0;
  for (int dy = -m; dy <= m; ++dy) {
    for (int dx = -m; dx <= m; ++dx) {
      const auto r2 = static_cast<std::size_t>(dx * dx + dy * dy);
      double v = 0.0;
      if (static_cast<double>(r2) <= cut2) {
        if (std::isnan(by_r2[r2])) by_r2[r2] = k.spatial(std::sqrt(static_cast<double>(r2)) * spacing);
        v = by_r2[r2];
      }
      k.grid(dx + m, dy + m) = v;
      sum += v;
      abs_sum += std::abs(v);
    }
  }
  k.mass = sum * spacing * spacing;
  k.l1_norm = abs_sum * spacing * spacing;
  k.profile = RadialProfile::tabulate(k.spatial, spacing / 4.0, support);
  const double centre = std::abs(k.spatial(0.0));
  double edge = 0.0;
  for (std::size_t i = 0; i < k.profile.values.size(); ++i)
    if (k.profile.dr * static_cast<double>(i) >= 0.95 * support) edge = std::max(edge, std::abs(k.profile.values[i]));
  k.tail = centre > 0.0 ? edge / centre : edge;
  return k;
}

SampledKernel gaussian(double spacing, double support, double std_dev) {
  if (!(std_dev > 0.0)) throw DomainError("gaussian: standard deviation must be positive");
  if (support < 8.0 * std_dev * (1.0 - 1e-12))
    throw TruncationError("gaussian: support must cover at least 8 standard deviations");
  const double v = std_dev * std_dev;
  return sample_radial_kernel(
      KernelKind::gaussian, [v](double r) { return std::exp(-0.5 * r * r / v) / (2.0 * kPi * v); },
      [v](double rho) { return std::exp(-0.5 * v * rho * rho); }, spacing, support);
}

SampledKernel jinc(double spacing, double support) {
  return sample_radial_kernel(
      KernelKind::jinc,
      [](double r) {
        // J1(r)/r = 1/2 - r^2/16 + O(r^4)
        if (r < 1e-6) return (0.5 - r * r / 16.0) / (2.0 * kPi);
        return bessel_j1(r) / (2.0 * kPi * r);
      },
      [](double rho) { return rho < 1.0 ? 1.0 : (rho == 1.0 ? 0.5 : 0.0); }, spacing, support);
}

SampledKernel mutual_intensity(double a, double spacing, double support) {
  if (!(a > 0.0)) throw DomainError("mutual_intensity: k*sigma*NA must be positive");
  return sample_radial_kernel(
      KernelKind::mutual_intensity,
      [a](double r) {
        const double x = a * r;
        if (x < 1e-6) return 1.0 - x * x / 8.0;
        return 2.0 * bessel_j1(x) / x;
      },
      [a](double rho) { return rho < a ? 4.0 * kPi / (a * a) : 0.0; }, spacing, support);
}

SampledKernel rescale_kernel(const SampledKernel& f, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("rescale_kernel: scale must be positive");
  auto sp = f.spatial;
  auto fo = f.fourier;
  const double inv2 = 1.0 / (s * s);
  return sample_radial_kernel(
      f.kind, [sp, s, inv2](double r) { return inv2 * sp(r / s); },
      [fo, s](double rho) { return fo ? fo(s * rho) : std::nan(""); }, f.spacing(), f.support * s);
}

ScalarField convolve(const ScalarField& f, const SampledKernel& k) {
  if (std::abs(k.spacing() - f.spacing()) > 1e-12 * f.spacing())
    throw ConfigError("convolve: kernel spacing does not match field spacing");
  const double extent = std::hypot(f.nx() - 1, f.ny() - 1) * f.spacing();
  if (k.tail > 1e-8 && k.support < extent)
    throw TruncationError("convolve: kernel is truncated inside the field extent and has not decayed");
  return convolve(f, k.grid);
}

// ---------------------------------------------------------------------------

double SmoothedPsf::fourier(double rho) const {
  rho = std::abs(rho);
  const double c1 = cutoff(rho / s0 - 1.0);
  return c1 + (1.0 - c1) * std::exp(-0.5 * rho * rho) * cutoff(rho / s0 - b);
}

namespace {

constexpr double kRadialStep = 0.05;
// exp(-rho^2/2) < 1e-16 beyond this frequency.
constexpr double kGaussianBand = 8.6;

struct Nodes {
  std::vector<double> rho;
  std::vector<double> weight;  // trapezoid weight times D^(rho)
};

void add_interval(Nodes& nodes, double a, double b, double max_step, const SmoothedPsf& psf) {
  if (b <= a) return;
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / max_step));
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    const double rho = a + h * static_cast<double>(i);
    const double d_hat = psf.fourier(rho) - std::exp(-0.5 * rho * rho);
    const double w = (i == 0 || i == n) ? 0.5 * h : h;
    if (d_hat != 0.0) {
      nodes.rho.push_back(rho);
      nodes.weight.push_back(w * d_hat);
    }
  }
}

}  // namespace

SmoothedPsf evaluate_smoothed_psf(double s0, double b0, std::function<double(double)> cutoff) {
  if (!(s0 > 0.0 && s0 <= 1.0)) throw DomainError("smoothed psf: s0 must lie in (0, 1]");
  if (!(b0 / s0 >= 2.0)) throw DomainError("smoothed psf: b must be at least 2");
  SmoothedPsf psf;
  psf.s0 = s0;
  psf.b0 = b0;
  psf.b = b0 / s0;
  psf.cutoff = std::move(cutoff);

  // T = G + D. D^ = T^ - G^ is supported on [0, 2 s0] and [b0, inf); the second
  // piece is below double precision past kGaussianBand.
  const double r_max = 40.0 / s0 + 10.0;
  const double step = std::min(s0 / 64.0, 1.0 / r_max);
  Nodes nodes;
  add_interval(nodes, 0.0, std::min(2.0 * s0, b0), step, psf);
  add_interval(nodes, std::max(2.0 * s0, b0), std::max(kGaussianBand, b0), 1.0 / r_max, psf);

  const auto nr = static_cast<std::size_t>(std::ceil(r_max / kRadialStep)) + 1;
  RadialProfile t;
  t.dr = kRadialStep;
  t.values.resize(nr);
  double l1_dev = 0.0, grad_dev = 0.0, l1_t = 0.0;
  for (std::size_t k = 0; k < nr; ++k) {
    const double r = kRadialStep * static_cast<double>(k);
    double d = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < nodes.rho.size(); ++i) {
      const double rho = nodes.rho[i];
      const double w = nodes.weight[i] * rho;
      d += w * bessel_j0(r * rho);
      dd -= w * rho * bessel_j1(r * rho);
    }
    d /= 2.0 * kPi;
    dd /= 2.0 * kPi;
    const double g = std::exp(-0.5 * r * r) / (2.0 * kPi);
    t.values[k] = g + d;
    const double w = (k + 1 == nr ? 0.5 : 1.0) * 2.0 * kPi * r * kRadialStep;
    l1_dev += w * std::abs(d);
    grad_dev += w * std::abs(dd);
    l1_t += w * std::abs(g + d);
  }
  psf.profile = std::move(t);
  psf.deviation = l1_dev + grad_dev;
  psf.deviation_scaled = l1_dev + grad_dev / s0;
  psf.l1_norm = l1_t;
  psf.candidates_tried = 1;
  return psf;
}

SmoothedPsf build_smoothed_psf(double delta_tilde, std::function<double(double)> cutoff, PsfSearchBudget budget) {
  if (!(delta_tilde > 0.0)) throw DomainError("smoothed psf: target deviation must be positive");
  if (!cutoff) cutoff = smooth_cutoff;
  double best = std::numeric_limits<double>::infinity();
  int tried = 0;
  for (int i = 0; i <= budget.s0_halvings; ++i) {
    const double s0 = std::ldexp(1.0, -i);
    for (int j = 0; j <= budget.b0_doublings; ++j) {
      const double b0 = std::ldexp(2.0, j);
      SmoothedPsf psf = evaluate_smoothed_psf(s0, b0, cutoff);
      ++tried;
      best = std::min(best, psf.deviation);
      if (psf.deviation <= delta_tilde) {
        psf.delta_tilde = delta_tilde;
        psf.candidates_tried = tried;
        return psf;
      }
    }
  }
  std::ostringstream msg;
  msg << "smoothed psf: no (s0, b) within budget reaches deviation " << delta_tilde << " (best " << best << ")";
  throw ConstructionFailed(msg.str(), best);
}

SampledKernel sample_psf(const SmoothedPsf& psf, double scale, double spacing, double support) {
  if (!(scale > 0.0)) throw DomainError("sample_psf: scale must be positive");
  const RadialProfile profile = psf.profile;
  const SmoothedPsf copy = psf;
  const double inv2 = 1.0 / (scale * scale);
  return sample_radial_kernel(
      KernelKind::smoothed_psf, [profile, scale, inv2](double r) { return inv2 * profile(r / scale); },
      [copy, scale](double rho) { return copy.fourier(scale * rho); }, spacing, support);
}

}  // namespace litho
