#pragma once

#include <cmath>
#include <random>

#include "contour.hpp"
#include "field.hpp"
#include "kernels.hpp"

namespace testing {

inline litho::ScalarField disk_field(const litho::GridSpec& g, double cx, double cy, double r) {
  return litho::ScalarField::from_function(g, [&](double x, double y) { return std::hypot(x - cx, y - cy) <= r ? 1.0 : 0.0; });
}

inline litho::BinaryPattern disk(const litho::GridSpec& g, double cx, double cy, double r) {
  return litho::BinaryPattern(disk_field(g, cx, cy, r));
}

// Axis-aligned square of side a centred at (cx, cy), by cell centres.
inline litho::BinaryPattern square(const litho::GridSpec& g, double cx, double cy, double a) {
  return litho::BinaryPattern(litho::ScalarField::from_function(g, [&](double x, double y) {
    return (std::abs(x - cx) < 0.5 * a && std::abs(y - cy) < 0.5 * a) ? 1.0 : 0.0;
  }));
}

inline litho::ScalarField random_field(const litho::GridSpec& g, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  litho::ScalarField f(g);
  for (auto& v : f.values()) v = U(rng);
  return f;
}


// The default smoothed PSF, built once per test process.
inline const litho::SmoothedPsf& default_psf() {
  static const litho::SmoothedPsf psf = litho::build_smoothed_psf(0.05);
  return psf;
}

}  // namespace testing
