#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace litho {

// Uniform sample lattice. Sample (i, j) sits at (origin_x + i*spacing,
// origin_y + j*spacing); each sample represents one cell of area spacing^2.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double spacing = 1.0;
  double origin_x = 0.0;
  double origin_y = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double cell_area() const { return spacing * spacing; }
  double x(int i) const { return origin_x + i * spacing; }
  double y(int j) const { return origin_y + j * spacing; }
  double center_x() const { return origin_x + 0.5 * (nx - 1) * spacing; }
  double center_y() const { return origin_y + 0.5 * (ny - 1) * spacing; }
  double width() const { return nx * spacing; }
  double height() const { return ny * spacing; }

  // Square window [-half, half]^2 sampled at n cell centres.
  static GridSpec centered(int n, double half_width);

  bool operator==(const GridSpec&) const = default;
};

// Throws ConfigError unless the two grids coincide (spacing/origin to 1e-12 relative).
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const GridSpec& grid, F&& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) out(i, j) = f(grid.x(i), grid.y(j));
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  int nx() const { return grid_.nx; }
  int ny() const { return grid_.ny; }
  double spacing() const { return grid_.spacing; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.nx) + static_cast<std::size_t>(i);
  }

  // Cell-area weighted sum: the discrete integral.
  double integral() const;
  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);

// y <- y + a*x
void axpy(double a, const ScalarField& x, ScalarField& y);
// Unweighted inner product of sample values.
double dot(const ScalarField& a, const ScalarField& b);

struct Gradient {
  ScalarField dx;
  ScalarField dy;
};

// Second-order central differences inside, second-order one-sided at edges.
Gradient gradient(const ScalarField& f);

// Exact transpose of gradient(): returns D_x^T gx + D_y^T gy. Used for
// analytic derivatives of functionals built on gradient().
ScalarField gradient_transpose(const ScalarField& gx, const ScalarField& gy);

// Integral of |grad f| with the gradient() stencil.
double total_variation(const ScalarField& f);

// Integral of |f - g|. Grids must match.
double l1_distance(const ScalarField& f, const ScalarField& g);

// Linear convolution (f * k) evaluated on f's grid. `kernel` must have odd
// dimensions with its centre sample at offset zero and the same spacing as f.
// Zero padding, no wraparound. Throws ConfigError on spacing mismatch.
ScalarField convolve(const ScalarField& f, const ScalarField& kernel);

}  // namespace litho
