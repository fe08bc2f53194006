#pragma once

#include <string>
#include <vector>

#include "contour.hpp"
#include "extreal.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "phasefield.hpp"

namespace litho {

struct ObjectiveConfig {
  double b = 0.02;                         // perimeter weight
  std::vector<double> eps_schedule;        // model length units, strictly decreasing; empty = default
  double eta0 = 0.25;                      // eta(eps) = eta0 * eps / eps_schedule[0]
  double kappa = 0.0;                      // smoothing of the outer |.|; 0 = 1e-3 P(target)
  double p = 2.0;
  double iota = 1e-12;                     // guard inside |grad Phi|
  // Projected gradient with Armijo backtracking.
  double step0 = 1.0;
  double step_max = 64.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 40;
  int max_iterations = 150;
  double tol = 1e-6;                       // stop when the relative decrease falls below this
  double gamma = 0.0;                      // L1 ball radius around the reference; 0 disables
  int snapshot_every = 0;

  // The schedule used when none is given: {6, 4, 2, 1} cells.
  static std::vector<double> default_schedule(double spacing);
  std::vector<std::string> validate() const;
  double eta_of(double eps) const;
};

// Everything the objective needs besides u and eps.
struct Problem {
  const Imager* imager = nullptr;
  BinaryPattern target;
  PhaseFieldSpec phase;
  ObjectiveConfig obj;
  double target_perimeter = 0.0;
  double kappa = 0.0;               // resolved smoothing width
  ScalarField reference;            // chi_D for the gamma constraint (target by default)

  Problem(const Imager& imager, BinaryPattern target, ObjectiveConfig obj);
};

// sqrt(x^2 + k^2) - k
double smooth_abs(double x, double kappa);

struct DEtaTerms {
  double total = 0.0;
  double area = 0.0;   // int |Phi - chi|
  double tv = 0.0;     // int |grad Phi|
};

DEtaTerms d_eta(const ScalarField& u, const Problem& pb, double eta);

struct FTerms {
  ExtReal F;
  double d = 0.0;
  ExtReal P;
};

FTerms F_eps_terms(const ScalarField& u, const Problem& pb, double eps);
ExtReal F_eps(const ScalarField& u, const Problem& pb, double eps);
// Derivative of F_eps with respect to every sample of u (no projection).
ScalarField gradient_F_eps(const ScalarField& u, const Problem& pb, double eps);

// d3(Omega(u), target) + b P(u); +inf for non-binary u or support violation.
ExtReal F_zero(const ScalarField& u, const Problem& pb);

// Box [0, 1], zero off the allowed region, and (if enabled) the L1 ball.
void project(ScalarField& u, const Problem& pb);

struct IterationLog {
  int iter = 0;
  double F = 0.0;
  double d = 0.0;
  double P = 0.0;
  double step = 0.0;
  int backtracks = 0;
};

struct MinimizeResult {
  ScalarField u;
  double F_initial = 0.0;
  FTerms terms;
  int iterations = 0;
  bool stalled = false;   // line search exhausted its backtracks
  bool converged = false; // relative decrease below tol
  std::vector<IterationLog> log;
  std::vector<ScalarField> snapshots;
};

MinimizeResult minimize_F_eps(const ScalarField& u0, const Problem& pb, double eps);

struct SweepRecord {
  double eps = 0.0;
  double eta = 0.0;
  ScalarField u;
  double F_initial = 0.0;
  double F = 0.0;
  double d = 0.0;
  double P = 0.0;
  double l1_step = 0.0;  // int |u_eps - u_previous|, the first against the initial guess
  int iterations = 0;
  bool stalled = false;
  std::vector<IterationLog> log;
  std::vector<ScalarField> snapshots;  // every obj.snapshot_every iterations
};

struct SweepTrace {
  ScalarField initial;
  std::vector<SweepRecord> records;
  ScalarField final_mask;          // last minimizer thresholded at 1/2
  ExtReal f_zero;
  DistanceReport final_report;     // Omega(final_mask) vs target
  DistanceReport identity_report;  // Omega(chi_target) vs target
  bool any_stall = false;
};

SweepTrace gamma_sweep(const Problem& pb);

// u > 1/2 -> 1, else 0.
ScalarField binarize(const ScalarField& u);

}  // namespace litho
