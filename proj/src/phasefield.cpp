#include "phasefield.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "geometry.hpp"

namespace litho {

double double_well(double t) {
  const double a = t * (t - 1.0);
  return 9.0 * a * a;
}

double double_well_derivative(double t) { return 18.0 * t * (t - 1.0) * (2.0 * t - 1.0); }

void validate_well(const DoubleWell& well) {
  if (!well.w) throw ConfigError("double well: W is not set");
  if (well.w(0.0) != 0.0 || well.w(1.0) != 0.0) throw ConfigError("double well: W must vanish at 0 and 1");
  for (int k = 1; k < 64; ++k) {
    const double t = k / 64.0;
    if (!(well.w(t) > 0.0)) throw ConfigError("double well: W must be positive on (0, 1)");
  }
  for (int k = -32; k <= 96; ++k)
    if (!(well.w(k / 64.0) >= 0.0)) throw ConfigError("double well: W must be nonnegative");
}

double compute_cp(const DoubleWell& well, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("compute_cp: p must lie in (1, inf)");
  const double e = (p - 1.0) / p;  // 1/p'
  auto f = [&](double t) { return std::pow(std::max(well.w(t), 0.0), e); };
  double err = 0.0;
  const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14, &err);
  if (!(I >= 1e-12)) throw DomainError("compute_cp: degenerate well (vanishing integral)");
  return 1.0 / I;
}

namespace {

ScalarField collar_of(const ScalarField& region) {
  const int nx = region.nx(), ny = region.ny();
  ScalarField allowed(region.grid());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (region(i, j) == 0.0) continue;
      const bool edge = i == 0 || j == 0 || i == nx - 1 || j == ny - 1 || region(i - 1, j) == 0.0 ||
                        region(i + 1, j) == 0.0 || region(i, j - 1) == 0.0 || region(i, j + 1) == 0.0;
      allowed(i, j) = edge ? 0.0 : 1.0;
    }
  }
  return allowed;
}

}  // namespace

PhaseDomain PhaseDomain::disk(const GridSpec& grid, double radius) {
  PhaseDomain d;
  d.shape = DomainShape::disk;
  d.region = ScalarField(grid);
  const double cx = grid.center_x(), cy = grid.center_y();
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      d.region(i, j) = std::hypot(grid.x(i) - cx, grid.y(j) - cy) <= radius ? 1.0 : 0.0;
  d.allowed = collar_of(d.region);
  return d;
}

PhaseDomain PhaseDomain::rectangle(const GridSpec& grid, double x0, double y0, double x1, double y1) {
  PhaseDomain d;
  d.shape = DomainShape::rectangle;
  d.region = ScalarField(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i), y = grid.y(j);
      d.region(i, j) = (x >= x0 && x <= x1 && y >= y0 && y <= y1) ? 1.0 : 0.0;
    }
  d.allowed = collar_of(d.region);
  return d;
}

bool PhaseDomain::supports(const ScalarField& u, double tol) const {
  require_same_grid(u.grid(), allowed.grid(), "phase domain");
  for (std::size_t k = 0; k < u.size(); ++k)
    if (allowed[k] == 0.0 && std::abs(u[k]) > tol) return false;
  return true;
}

PhaseFieldSpec PhaseFieldSpec::make(const PhaseDomain& domain, double p, DoubleWell well) {
  validate_well(well);
  PhaseFieldSpec s;
  s.well = std::move(well);
  s.p = p;
  s.cp = compute_cp(s.well, p);
  s.domain = domain;
  return s;
}

MMTerms modica_mortola_terms(const ScalarField& u, double p) {
  MMTerms t;
  const Gradient g = gradient(u);
  double w = 0.0, q = 0.0;
  const bool quadratic = p == 2.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    w += double_well(u[k]);
    const double n2 = g.dx[k] * g.dx[k] + g.dy[k] * g.dy[k];
    q += quadratic ? n2 : std::pow(n2, 0.5 * p);
  }
  t.well = w * u.grid().cell_area();
  t.gradient = q * u.grid().cell_area();
  return t;
}

ExtReal modica_mortola(const ScalarField& u, double eps, const PhaseFieldSpec& spec) {
  if (!(eps > 0.0)) throw DomainError("modica_mortola: eps must be positive");
  if (!spec.domain.supports(u)) return ExtReal::infinity();
  double w = 0.0, q = 0.0;
  const Gradient g = gradient(u);
  const bool quadratic = spec.p == 2.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    w += spec.well.w(u[k]);
    const double n2 = g.dx[k] * g.dx[k] + g.dy[k] * g.dy[k];
    q += quadratic ? n2 : std::pow(n2, 0.5 * spec.p);
  }
  const double a = u.grid().cell_area();
  return spec.cp / (spec.p_conjugate() * eps) * w * a + spec.cp * std::pow(eps, spec.p - 1.0) / spec.p * q * a;
}

ScalarField modica_mortola_gradient(const ScalarField& u, double eps, const PhaseFieldSpec& spec, double iota) {
  if (!(eps > 0.0)) throw DomainError("modica_mortola: eps must be positive");
  const double a = u.grid().cell_area();
  Gradient g = gradient(u);
  // d/du of sum |g|^p = D^T (p |g|^{p-2} g)
  if (spec.p != 2.0) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double n2 = g.dx[k] * g.dx[k] + g.dy[k] * g.dy[k] + iota;
      const double f = std::pow(n2, 0.5 * spec.p - 1.0);
      g.dx[k] *= f;
      g.dy[k] *= f;
    }
  }
  ScalarField out = gradient_transpose(g.dx, g.dy);
  const double cg = spec.cp * std::pow(eps, spec.p - 1.0) * a;  // (c eps^{p-1} / p) * p
  const double cw = spec.cp / (spec.p_conjugate() * eps) * a;
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = cg * out[k] + cw * spec.well.dw(u[k]);
  return out;
}

ExtReal limit_perimeter(const ScalarField& u, const PhaseFieldSpec& spec) {
  ScalarField b(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = u[k];
    if (std::abs(v) <= 1e-9) {
      b[k] = 0.0;
    } else if (std::abs(v - 1.0) <= 1e-9) {
      b[k] = 1.0;
    } else {
      return ExtReal::infinity();
    }
  }
  if (!spec.domain.supports(b)) return ExtReal::infinity();
  return perimeter(BinaryPattern(std::move(b)));
}

double optimal_profile_value(double x, double eps) {
  if (!(eps > 0.0)) throw DomainError("optimal_profile: eps must be positive");
  const double z = 3.0 * x / eps;
  // Stable on both tails.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> optimal_profile(double eps, double length, double spacing) {
  if (!(spacing > 0.0) || !(length >= 0.0)) throw DomainError("optimal_profile: bad sampling");
  const auto n = static_cast<std::size_t>(std::floor(length / spacing + 1e-9)) + 1;
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = optimal_profile_value(-0.5 * length + spacing * static_cast<double>(k), eps);
  return q;
}

ScalarField mollified_indicator(const BinaryPattern& p, double eps, const PhaseDomain& domain) {
  ScalarField u(p.grid());
  if (p.empty()) return u;
  const ScalarField d_in = distance_transform(p);
  ScalarField comp(p.grid());
  for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = p.bitmap()[k] != 0.0 ? 0.0 : 1.0;
  const BinaryPattern outside(std::move(comp));
  const ScalarField d_out = distance_transform(outside);
  const double half = 0.5 * p.grid().spacing;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (domain.allowed[k] == 0.0) continue;
    // The boundary sits half a cell beyond the last set cell centre.
    const double sd = p.bitmap()[k] != 0.0 ? std::min(d_out[k], 1e30) - half : half - d_in[k];
    u[k] = optimal_profile_value(sd, eps);
  }
  return u;
}

}  // namespace litho
