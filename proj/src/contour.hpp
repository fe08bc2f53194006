#pragma once

#include <vector>

#include "field.hpp"

namespace litho {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Closed polyline; the edge from back() to front() is implicit.
using Polyline = std::vector<Point>;

// Boundary of {f > level} as closed loops, oriented counter-clockwise around
// the region (region on the left). The field is padded with `outside` so loops
// touching the window edge still close; pass nothing to pad with a value
// strictly below min(f, level). Saddles are resolved by the cell-centre mean.
std::vector<Polyline> marching_squares(const ScalarField& f, double level);
std::vector<Polyline> marching_squares(const ScalarField& f, double level, double outside);

double polyline_length(const Polyline& p);
double total_length(const std::vector<Polyline>& loops);

// One pass of [1, 2, 1] / 4 vertex averaging along a closed loop.
Polyline smooth_closed(const Polyline& p);

// Largest turning angle accumulated over any arc of length `arc`, divided by
// `arc`: a curvature bound that is stable under vertex noise. Zero for empty input.
double max_turning_rate(const std::vector<Polyline>& loops, double arc);

// {0,1} field plus its sub-pixel boundary.
class BinaryPattern {
 public:
  BinaryPattern() = default;
  // Throws ConfigError unless every value is exactly 0 or 1.
  explicit BinaryPattern(ScalarField bitmap);
  // Keeps a caller-supplied contour (e.g. traced on a smooth field).
  BinaryPattern(ScalarField bitmap, std::vector<Polyline> contour);
  // Cells with f > threshold become 1.
  static BinaryPattern threshold(const ScalarField& f, double threshold);

  const ScalarField& bitmap() const { return bitmap_; }
  const GridSpec& grid() const { return bitmap_.grid(); }
  // Level-1/2 marching-squares loops after one smoothing pass.
  const std::vector<Polyline>& contour() const { return contour_; }

  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }
  double area() const { return static_cast<double>(count_) * grid().cell_area(); }
  bool at(int i, int j) const { return bitmap_(i, j) != 0.0; }

 private:
  ScalarField bitmap_;
  std::vector<Polyline> contour_;
  std::size_t count_ = 0;
};

// 4-connected components of the set cells.
int count_components(const BinaryPattern& p);

}  // namespace litho
