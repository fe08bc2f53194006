#pragma once

#include <functional>
#include <string>
#include <vector>

#include "contour.hpp"
#include "extreal.hpp"
#include "field.hpp"

namespace litho {

// W(t) = 9 t^2 (t - 1)^2 and W'(t) = 18 t (t - 1)(2t - 1).
double double_well(double t);
double double_well_derivative(double t);

struct DoubleWell {
  std::function<double(double)> w = double_well;
  std::function<double(double)> dw = double_well_derivative;
  std::string name = "9t^2(t-1)^2";
};

// Throws ConfigError unless W >= 0, W(0) = W(1) = 0 and W > 0 at interior samples.
void validate_well(const DoubleWell& well);

// c_p = (int_0^1 W^{1/p'})^{-1}, p' = p / (p - 1), by adaptive Gauss-Kronrod.
// DomainError for p <= 1 or a degenerate (vanishing) integral.
double compute_cp(const DoubleWell& well, double p);

enum class DomainShape { disk, rectangle };

// The convex region D where phase fields may live, with the one-cell collar
// (cells of D with a 4-neighbour outside D) where u is pinned to zero.
struct PhaseDomain {
  ScalarField region;   // 1 on D
  ScalarField allowed;  // 1 on D minus its collar
  DomainShape shape = DomainShape::disk;

  // Disk of `radius` about the window centre.
  static PhaseDomain disk(const GridSpec& grid, double radius);
  // Axis-aligned rectangle [x0, x1] x [y0, y1].
  static PhaseDomain rectangle(const GridSpec& grid, double x0, double y0, double x1, double y1);
  // True if |u| <= tol wherever u must vanish.
  bool supports(const ScalarField& u, double tol = 1e-12) const;
};

struct PhaseFieldSpec {
  DoubleWell well;
  double p = 2.0;
  double cp = 2.0;
  PhaseDomain domain;

  // Recomputes cp from the well.
  static PhaseFieldSpec make(const PhaseDomain& domain, double p = 2.0, DoubleWell well = {});
  double p_conjugate() const { return p / (p - 1.0); }
};

// c_p/(p' eps) int W(u) + c_p eps^{p-1}/p int |grad u|^p, summed over the window
// (u vanishes outside D). +inf sentinel if u is nonzero where it must vanish.
ExtReal modica_mortola(const ScalarField& u, double eps, const PhaseFieldSpec& spec);

// The two terms separately (no support check).
struct MMTerms {
  double well = 0.0;      // int W(u)
  double gradient = 0.0;  // int |grad u|^p
};
MMTerms modica_mortola_terms(const ScalarField& u, double p);

// Derivative of modica_mortola with respect to every sample of u. For p < 2 the
// gradient norm is regularised as (|grad u|^2 + iota)^{1/2}.
ScalarField modica_mortola_gradient(const ScalarField& u, double eps, const PhaseFieldSpec& spec,
                                    double iota = 1e-12);

// Perimeter of {u = 1} when u is binary (within 1e-9) and supported in D; +inf otherwise.
ExtReal limit_perimeter(const ScalarField& u, const PhaseFieldSpec& spec);

// q(x) = 1 / (1 + exp(-3x/eps)), which solves eps q' = 3 q (1 - q) = sqrt(W(q)).
double optimal_profile_value(double x, double eps);
// Samples of q at x_k = -length/2 + k spacing, k = 0..floor(length/spacing).
std::vector<double> optimal_profile(double eps, double length, double spacing);

// u = q(signed distance to the boundary of p), zeroed outside the allowed region.
ScalarField mollified_indicator(const BinaryPattern& p, double eps, const PhaseDomain& domain);

}  // namespace litho
