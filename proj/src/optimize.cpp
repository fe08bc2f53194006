#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "kernels.hpp"

namespace litho {

std::vector<double> ObjectiveConfig::default_schedule(double spacing) {
  return {6.0 * spacing, 4.0 * spacing, 2.0 * spacing, 1.0 * spacing};
}

std::vector<std::string> ObjectiveConfig::validate() const {
  std::vector<std::string> e;
  if (!(b > 0.0)) e.push_back("objective.b must be positive");
  if (!(eta0 > 0.0)) e.push_back("objective.eta0 must be positive");
  if (!(kappa >= 0.0)) e.push_back("objective.kappa must be nonnegative (0 selects the default)");
  if (!(p > 1.0)) e.push_back("objective.p must exceed 1");
  if (!(iota > 0.0)) e.push_back("objective.iota must be positive");
  if (!(step0 > 0.0) || !(step_max >= step0)) e.push_back("objective.step0 must be positive and at most step_max");
  if (!(backtrack > 0.0 && backtrack < 1.0)) e.push_back("objective.backtrack must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) e.push_back("objective.armijo must lie in (0, 1)");
  if (max_backtracks < 1) e.push_back("objective.max_backtracks must be at least 1");
  if (max_iterations < 1) e.push_back("objective.max_iterations must be at least 1");
  if (!(tol >= 0.0)) e.push_back("objective.tol must be nonnegative");
  if (!(gamma >= 0.0)) e.push_back("objective.gamma must be nonnegative");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0)) e.push_back("objective.eps_schedule entries must be positive");
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
      e.push_back("objective.eps_schedule must be strictly decreasing");
  }
  return e;
}

double ObjectiveConfig::eta_of(double eps) const {
  if (eps_schedule.empty()) throw ConfigError("objective: eps schedule is empty");
  return eta0 * eps / eps_schedule.front();
}

Problem::Problem(const Imager& im, BinaryPattern tgt, ObjectiveConfig o)
    : imager(&im), target(std::move(tgt)), obj(std::move(o)) {
  require_same_grid(target.grid(), im.grid(), "problem target");
  if (obj.eps_schedule.empty()) obj.eps_schedule = ObjectiveConfig::default_schedule(im.grid().spacing);
  auto errors = obj.validate();
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid objective configuration:";
    for (const auto& m : errors) os << "\n  " << m;
    throw ConfigError(os.str());
  }
  const GridSpec& g = im.grid();
  const PhaseDomain domain = im.config().support == SupportRegion::disk
                                 ? PhaseDomain::disk(g, im.domain_radius())
                                 : PhaseDomain::rectangle(g, g.x(0), g.y(0), g.x(g.nx - 1), g.y(g.ny - 1));
  phase = PhaseFieldSpec::make(domain, obj.p);
  target_perimeter = perimeter(target);
  kappa = obj.kappa > 0.0 ? obj.kappa : 1e-3 * (target_perimeter > 0.0 ? target_perimeter : g.spacing);
  reference = target.bitmap();
}

double smooth_abs(double x, double kappa) { return std::sqrt(x * x + kappa * kappa) - kappa; }

namespace {

struct Exposure {
  ScalarField intensity;
  ScalarField phi;
  Gradient grad;
  DEtaTerms terms;
};

Exposure expose(const ScalarField& u, const Problem& pb, double eta) {
  Exposure e;
  e.intensity = pb.imager->intensity(u);
  e.phi = smoothed_exposure(e.intensity, pb.imager->config().h, eta);
  e.grad = gradient(e.phi);
  const double a = u.grid().cell_area();
  const double ri = std::sqrt(pb.obj.iota);
  double area = 0.0, tv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    area += std::abs(e.phi[k] - pb.target.bitmap()[k]);
    // Offset by sqrt(iota) so flat fields contribute exactly zero.
    tv += std::sqrt(e.grad.dx[k] * e.grad.dx[k] + e.grad.dy[k] * e.grad.dy[k] + pb.obj.iota) - ri;
  }
  e.terms.area = area * a;
  e.terms.tv = tv * a;
  e.terms.total = e.terms.area + smooth_abs(e.terms.tv - pb.target_perimeter, pb.kappa);
  return e;
}

}  // namespace

DEtaTerms d_eta(const ScalarField& u, const Problem& pb, double eta) {
  if (!(eta > 0.0)) throw DomainError("d_eta: eta must be positive");
  return expose(u, pb, eta).terms;
}

FTerms F_eps_terms(const ScalarField& u, const Problem& pb, double eps) {
  FTerms t;
  t.P = modica_mortola(u, eps, pb.phase);
  t.d = d_eta(u, pb, pb.obj.eta_of(eps)).total;
  t.F = ExtReal(t.d) + pb.obj.b * t.P;
  return t;
}

ExtReal F_eps(const ScalarField& u, const Problem& pb, double eps) { return F_eps_terms(u, pb, eps).F; }

ScalarField gradient_F_eps(const ScalarField& u, const Problem& pb, double eps) {
  const double eta = pb.obj.eta_of(eps);
  const Exposure e = expose(u, pb, eta);
  const double a = u.grid().cell_area();
  const double x = e.terms.tv - pb.target_perimeter;
  const double dabs = x / std::sqrt(x * x + pb.kappa * pb.kappa);
  // d/dPhi of the TV integral: D^T (g / |g|).
  ScalarField nx(u.grid()), ny(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double n = std::sqrt(e.grad.dx[k] * e.grad.dx[k] + e.grad.dy[k] * e.grad.dy[k] + pb.obj.iota);
    nx[k] = e.grad.dx[k] / n;
    ny[k] = e.grad.dy[k] / n;
  }
  const ScalarField dtv = gradient_transpose(nx, ny);
  const double h = pb.imager->config().h;
  ScalarField w(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    // |Phi - chi| is smooth because Phi lies in [0, 1] and chi in {0, 1}.
    const double d_phi = a * (1.0 - 2.0 * pb.target.bitmap()[k]) + dabs * a * dtv[k];
    w[k] = d_phi * smooth_heaviside_derivative((e.intensity[k] - h) / eta) / eta;
  }
  ScalarField g = pb.imager->intensity_vjp(u, w);
  const ScalarField gm = modica_mortola_gradient(u, eps, pb.phase, pb.obj.iota);
  axpy(pb.obj.b, gm, g);
  return g;
}

ScalarField binarize(const ScalarField& u) {
  ScalarField b(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) b[k] = u[k] > 0.5 ? 1.0 : 0.0;
  return b;
}

ExtReal F_zero(const ScalarField& u, const Problem& pb) {
  const ExtReal P = limit_perimeter(u, pb.phase);
  if (P.is_infinite()) return P;
  const ScalarField I = pb.imager->intensity(u);
  const DistanceReport r = strict_distance(exposed_set(I, pb.imager->config().h), pb.target);
  return ExtReal(r.d3) + pb.obj.b * P;
}

void project(ScalarField& u, const Problem& pb) {
  const ScalarField& allowed = pb.phase.domain.allowed;
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = allowed[k] == 0.0 ? 0.0 : std::clamp(u[k], 0.0, 1.0);
  if (pb.obj.gamma <= 0.0) return;
  // Shrinking u - chi towards zero keeps the box, so the intersection with the
  // L1 ball is a soft threshold whose level is found by bisection.
  const double a = u.grid().cell_area();
  auto excess = [&](double tau) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += std::max(std::abs(u[k] - pb.reference[k]) - tau, 0.0);
    return s * a;
  };
  if (excess(0.0) <= pb.obj.gamma) return;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > pb.obj.gamma ? lo : hi) = mid;
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = u[k] - pb.reference[k];
    const double m = std::max(std::abs(v) - hi, 0.0);
    u[k] = pb.reference[k] + std::copysign(m, v);
    if (allowed[k] == 0.0) u[k] = 0.0;
  }
}

MinimizeResult minimize_F_eps(const ScalarField& u0, const Problem& pb, double eps) {
  MinimizeResult r;
  r.u = u0;
  project(r.u, pb);
  r.terms = F_eps_terms(r.u, pb, eps);
  if (r.terms.F.is_infinite()) throw DomainError("minimize_F_eps: initial guess has infinite energy");
  r.F_initial = r.terms.F.value();
  double F = r.F_initial;
  const double inv_a = 1.0 / u0.grid().cell_area();
  double step = pb.obj.step0;
  r.log.push_back({0, F, r.terms.d, r.terms.P.value(), 0.0, 0});

  for (int it = 1; it <= pb.obj.max_iterations; ++it) {
    const ScalarField g = gradient_F_eps(r.u, pb, eps);
    bool accepted = false;
    int bt = 0;
    ScalarField trial;
    FTerms t;
    for (; bt <= pb.obj.max_backtracks; ++bt) {
      trial = r.u;
      axpy(-step * inv_a, g, trial);
      project(trial, pb);
      // Armijo condition along the projection arc.
      double decrease = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) decrease += g[k] * (r.u[k] - trial[k]);
      if (decrease <= 0.0) {
        // Projected gradient vanishes: a stationary point.
        break;
      }
      t = F_eps_terms(trial, pb, eps);
      if (t.F.is_finite() && t.F.value() <= F - pb.obj.armijo * decrease) {
        accepted = true;
        break;
      }
      step *= pb.obj.backtrack;
    }
    if (!accepted) {
      r.converged = bt <= pb.obj.max_backtracks;
      r.stalled = !r.converged;
      break;
    }
    const double F_new = t.F.value();
    const double rel = (F - F_new) / std::max(std::abs(F), 1e-12);
    r.u = std::move(trial);
    r.terms = t;
    F = F_new;
    r.iterations = it;
    r.log.push_back({it, F, t.d, t.P.value(), step, bt});
    if (pb.obj.snapshot_every > 0 && it % pb.obj.snapshot_every == 0) r.snapshots.push_back(r.u);
    if (rel < pb.obj.tol) {
      r.converged = true;
      break;
    }
    step = std::min(step / pb.obj.backtrack, pb.obj.step_max);
  }
  return r;
}

SweepTrace gamma_sweep(const Problem& pb) {
  if (pb.obj.eps_schedule.empty()) throw ConfigError("gamma_sweep: empty schedule");
  SweepTrace tr;
  tr.initial = mollified_indicator(pb.target, pb.obj.eps_schedule.front(), pb.phase.domain);
  ScalarField u = tr.initial;
  for (double eps : pb.obj.eps_schedule) {
    MinimizeResult m = minimize_F_eps(u, pb, eps);
    SweepRecord rec;
    rec.eps = eps;
    rec.eta = pb.obj.eta_of(eps);
    rec.F_initial = m.F_initial;
    rec.F = m.terms.F.value();
    rec.d = m.terms.d;
    rec.P = m.terms.P.value();
    rec.l1_step = l1_distance(m.u, u);
    rec.iterations = m.iterations;
    rec.stalled = m.stalled;
    rec.log = std::move(m.log);
    rec.snapshots = std::move(m.snapshots);
    rec.u = m.u;
    tr.any_stall = tr.any_stall || m.stalled;
    u = std::move(m.u);
    tr.records.push_back(std::move(rec));
  }
  tr.final_mask = binarize(u);
  tr.f_zero = F_zero(tr.final_mask, pb);
  const double h = pb.imager->config().h;
  tr.final_report = strict_distance(exposed_set(pb.imager->intensity(tr.final_mask), h), pb.target);
  ScalarField identity = pb.target.bitmap();
  for (std::size_t k = 0; k < identity.size(); ++k)
    if (pb.phase.domain.allowed[k] == 0.0) identity[k] = 0.0;
  tr.identity_report = strict_distance(exposed_set(pb.imager->intensity(identity), h), pb.target);
  return tr;
}

}  // namespace litho
