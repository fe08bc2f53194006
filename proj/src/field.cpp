#include "field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"
#include "fft.hpp"

namespace litho {

GridSpec GridSpec::centered(int n, double half_width) {
  GridSpec g;
  g.nx = n;
  g.ny = n;
  g.spacing = 2.0 * half_width / n;
  g.origin_x = -half_width + 0.5 * g.spacing;
  g.origin_y = g.origin_x;
  return g;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  const double tol = 1e-12 * std::max(a.spacing, b.spacing);
  if (a.nx != b.nx || a.ny != b.ny || std::abs(a.spacing - b.spacing) > tol ||
      std::abs(a.origin_x - b.origin_x) > 1e-9 * a.spacing || std::abs(a.origin_y - b.origin_y) > 1e-9 * a.spacing)
    throw ConfigError(std::string(what) + ": grid mismatch");
}

namespace {
void validate(const GridSpec& g) {
  if (g.nx < 2 || g.ny < 2) throw ConfigError("grid needs at least 2x2 samples");
  if (!(g.spacing > 0.0) || !std::isfinite(g.spacing)) throw ConfigError("grid spacing must be positive");
}
}  // namespace

ScalarField::ScalarField(const GridSpec& grid, double fill) : grid_(grid) {
  validate(grid);
  values_.assign(grid.size(), fill);
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  validate(grid);
  if (values_.size() != grid.size()) throw ConfigError("value count does not match grid");
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_area();
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field addition");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field subtraction");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

void axpy(double a, const ScalarField& x, ScalarField& y) {
  require_same_grid(x.grid(), y.grid(), "axpy");
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

double dot(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

namespace {

// One-dimensional derivative stencil along a line of n samples with stride.
// Writes d[k] = sum_m c[k][m] f[m] / h, or the transpose when `transpose`.
void derivative_line(const double* f, double* d, int n, std::size_t stride, double h, bool transpose) {
  auto F = [&](int k) { return f[static_cast<std::size_t>(k) * stride]; };
  auto D = [&](int k) -> double& { return d[static_cast<std::size_t>(k) * stride]; };
  const double inv2h = 1.0 / (2.0 * h);
  if (n == 2) {
    const double c = 1.0 / h;
    if (!transpose) {
      D(0) = (F(1) - F(0)) * c;
      D(1) = D(0);
    } else {
      D(0) = -(F(0) + F(1)) * c;
      D(1) = (F(0) + F(1)) * c;
    }
    return;
  }
  if (!transpose) {
    // Written as differences so constant lines give exactly zero.
    D(0) = (4.0 * (F(1) - F(0)) - (F(2) - F(0))) * inv2h;
    for (int k = 1; k < n - 1; ++k) D(k) = (F(k + 1) - F(k - 1)) * inv2h;
    D(n - 1) = (4.0 * (F(n - 1) - F(n - 2)) - (F(n - 1) - F(n - 3))) * inv2h;
    return;
  }
  for (int k = 0; k < n; ++k) D(k) = 0.0;
  D(0) += -3.0 * F(0) * inv2h;
  D(1) += 4.0 * F(0) * inv2h;
  D(2) += -F(0) * inv2h;
  for (int k = 1; k < n - 1; ++k) {
    D(k + 1) += F(k) * inv2h;
    D(k - 1) -= F(k) * inv2h;
  }
  D(n - 1) += 3.0 * F(n - 1) * inv2h;
  D(n - 2) += -4.0 * F(n - 1) * inv2h;
  D(n - 3) += F(n - 1) * inv2h;
}

void derivative_x(const ScalarField& f, ScalarField& out, bool transpose) {
  const auto in = f.values();
  auto o = out.values();
  for (int j = 0; j < f.ny(); ++j) {
    const std::size_t off = f.index(0, j);
    derivative_line(in.data() + off, o.data() + off, f.nx(), 1, f.spacing(), transpose);
  }
}

void derivative_y(const ScalarField& f, ScalarField& out, bool transpose) {
  const auto in = f.values();
  auto o = out.values();
  for (int i = 0; i < f.nx(); ++i)
    derivative_line(in.data() + i, o.data() + i, f.ny(), static_cast<std::size_t>(f.nx()), f.spacing(), transpose);
}

}  // namespace

Gradient gradient(const ScalarField& f) {
  Gradient g{ScalarField(f.grid()), ScalarField(f.grid())};
  derivative_x(f, g.dx, false);
  derivative_y(f, g.dy, false);
  return g;
}

ScalarField gradient_transpose(const ScalarField& gx, const ScalarField& gy) {
  require_same_grid(gx.grid(), gy.grid(), "gradient_transpose");
  ScalarField a(gx.grid());
  ScalarField b(gy.grid());
  derivative_x(gx, a, true);
  derivative_y(gy, b, true);
  return a += b;
}

double total_variation(const ScalarField& f) {
  const Gradient g = gradient(f);
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += std::hypot(g.dx[k], g.dy[k]);
  return s * f.grid().cell_area();
}

double l1_distance(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "l1_distance");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += std::abs(f[k] - g[k]);
  return s * f.grid().cell_area();
}

ScalarField convolve(const ScalarField& f, const ScalarField& kernel) {
  if (std::abs(kernel.spacing() - f.spacing()) > 1e-12 * f.spacing())
    throw ConfigError("convolve: kernel spacing does not match field spacing");
  Convolver conv(f.grid(), kernel);
  return conv.apply(f);
}

}  // namespace litho
