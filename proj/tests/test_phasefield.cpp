#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "helpers.hpp"
#include "phasefield.hpp"

using namespace litho;

namespace {

// Sigmoid of the exact signed distance to a circle, zeroed off the allowed region.
ScalarField sigmoid_disk(const PhaseDomain& d, double rho, double eps) {
  ScalarField u = ScalarField::from_function(d.allowed.grid(), [&](double x, double y) {
    return optimal_profile_value(rho - std::hypot(x, y), eps);
  });
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= d.allowed[k];
  return u;
}

}  // namespace

TEST_SUITE("phasefield") {

TEST_CASE("double well values and symmetry") {
  CHECK(double_well(0.0) == 0.0);
  CHECK(double_well(1.0) == 0.0);
  CHECK(double_well(0.5) == doctest::Approx(9.0 / 16.0).epsilon(1e-15));
  for (int k = 0; k < 20; ++k) {
    const double t = -0.3 + 1.6 * k / 19.0;
    CHECK(double_well(t) == doctest::Approx(double_well(1 - t)).epsilon(1e-14));
    const double d = 1e-6;
    CHECK(double_well_derivative(t) == doctest::Approx((double_well(t + d) - double_well(t - d)) / (2 * d)).epsilon(1e-6));
  }
  CHECK(double_well_derivative(0.5) == 0.0);
}

TEST_CASE("clamping to [0,1] never increases W") {
  // For t < 0, W(t) >= 0 = W(0); for t > 1, W(t) >= 0 = W(1).
  for (int k = 0; k <= 200; ++k) {
    const double t = -2.0 + 5.0 * k / 200.0;
    CHECK(double_well(std::clamp(t, 0.0, 1.0)) <= double_well(t));
  }
}

TEST_CASE("c_p quadrature") {
  CHECK(compute_cp(DoubleWell{}, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
  // A well with int W^{1/2} = 1: 6 t(1-t) squared.
  DoubleWell unit{[](double t) { return 36 * t * t * (1 - t) * (1 - t); },
                  [](double t) { return 72 * t * (1 - t) * (1 - 2 * t); }, "36t^2(1-t)^2"};
  CHECK(compute_cp(unit, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  // p = 4: int (3 t (1-t))^{3/2}, closed form 27 pi / 128 / ... checked against a fine midpoint rule.
  double I = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) / n;
    I += std::pow(double_well(t), 0.75) / n;
  }
  CHECK(compute_cp(DoubleWell{}, 4.0) == doctest::Approx(1.0 / I).epsilon(1e-8));
  CHECK_THROWS_AS(compute_cp(DoubleWell{}, 1.0), DomainError);
  DoubleWell zero{[](double) { return 0.0; }, [](double) { return 0.0; }, "0"};
  CHECK_THROWS_AS(compute_cp(zero, 2.0), DomainError);
  CHECK_THROWS_AS(validate_well(zero), ConfigError);
  DoubleWell offset{[](double t) { return 1 + t; }, [](double) { return 1.0; }, "bad"};
  CHECK_THROWS_AS(PhaseFieldSpec::make(PhaseDomain::disk(GridSpec::centered(8, 1.0), 0.9), 2.0, offset), ConfigError);
}

TEST_CASE("p = 2 reduces to (1/eps) int W + eps int |grad u|^2") {
  const GridSpec g = GridSpec::centered(48, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::rectangle(g, -1, -1, 1, 1));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    ScalarField u = testing::random_field(g, rng);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] *= spec.domain.allowed[k];
    const double eps = 0.05 * (t + 1);
    const MMTerms m = modica_mortola_terms(u, 2.0);
    const double classic = m.well / eps + eps * m.gradient;
    CHECK(modica_mortola(u, eps, spec).value() == doctest::Approx(classic).epsilon(1e-12));
  }
}

TEST_CASE("modica-mortola: zero, sentinel, errors, nonnegativity") {
  const GridSpec g = GridSpec::centered(64, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 0.9));
  CHECK(modica_mortola(ScalarField(g), 0.1, spec).value() == 0.0);
  CHECK(modica_mortola(ScalarField(g, 1.0), 0.1, spec).is_infinite());
  CHECK_THROWS_AS(modica_mortola(ScalarField(g), 0.0, spec), DomainError);
  std::mt19937_64 rng(8);
  ScalarField u = testing::random_field(g, rng);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= spec.domain.allowed[k];
  CHECK(modica_mortola(u, 0.1, spec).value() > 0.0);
}

TEST_CASE("modica-mortola gradient matches finite differences") {
  const GridSpec g = GridSpec::centered(24, 1.0);
  for (double p : {2.0, 3.0, 1.5}) {
    const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 0.9), p);
    std::mt19937_64 rng(9);
    ScalarField u = testing::random_field(g, rng, 0.1, 0.9), dir = testing::random_field(g, rng, -1, 1);
    for (std::size_t k = 0; k < u.size(); ++k) {
      u[k] *= spec.domain.allowed[k];
      dir[k] *= spec.domain.allowed[k];
    }
    const double eps = 0.1;
    const ScalarField gr = modica_mortola_gradient(u, eps, spec);
    const double t = 1e-5;
    ScalarField up = u, um = u;
    axpy(t, dir, up);
    axpy(-t, dir, um);
    const double fd = (modica_mortola(up, eps, spec).value() - modica_mortola(um, eps, spec).value()) / (2 * t);
    CHECK(dot(gr, dir) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("MM gradient vanishes at u = 1/2 in a flat interior") {
  const GridSpec g = GridSpec::centered(32, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::rectangle(g, -1, -1, 1, 1));
  const ScalarField gr = modica_mortola_gradient(ScalarField(g, 0.5), 0.1, spec);
  for (int j = 3; j < 29; ++j)
    for (int i = 3; i < 29; ++i) CHECK(std::abs(gr(i, j)) < 1e-14);
}

TEST_CASE("limit perimeter") {
  const GridSpec g = GridSpec::centered(256, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 0.95));
  const double rho = 0.5;
  const ExtReal P = limit_perimeter(testing::disk_field(g, 0, 0, rho), spec);
  CHECK(P.value() == doctest::Approx(2 * std::numbers::pi * rho).epsilon(0.02));
  ScalarField half = testing::disk_field(g, 0, 0, rho);
  half(128, 128) = 0.5;
  CHECK(limit_perimeter(half, spec).is_infinite());
  CHECK(limit_perimeter(testing::disk_field(g, 0.8, 0, 0.3), spec).is_infinite());
  CHECK(limit_perimeter(ScalarField(g), spec).value() == 0.0);
}

TEST_CASE("optimal profile: midpoint, ODE residual, tails") {
  const double eps = 0.1;
  CHECK(optimal_profile_value(0.0, eps) == 0.5);
  const auto q = optimal_profile(eps, 2.0, 0.01);
  CHECK(q.size() == 201);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double x = -1.0 + 0.01 * k;
    const double qq = optimal_profile_value(x, eps);
    CHECK(q[k] == qq);
    // q' = (3/eps) q (1 - q) in closed form.
    const double dq = 3.0 / eps * qq * (1 - qq);
    const double d = 1e-7;
    CHECK(std::abs(eps * (optimal_profile_value(x + d, eps) - optimal_profile_value(x - d, eps)) / (2 * d) - dq * eps) < 1e-8);
    CHECK(std::abs(eps * dq - std::sqrt(double_well(qq))) < 1e-12);
  }
  CHECK(optimal_profile_value(-50.0, 1e-3) == 0.0);
  CHECK(optimal_profile_value(50.0, 1e-3) == 1.0);
}

TEST_CASE("straight interface: profile energy per unit length tends to 1") {
  const GridSpec g = GridSpec::centered(192, 1.0);
  // Energy density of a profile across y = 0, integrated over |x|, |y| < 0.6.
  const double half = 0.6;
  int columns = 0;
  for (int i = 0; i < g.nx; ++i) columns += std::abs(g.x(i)) < half;
  const double ell = columns * g.spacing;
  for (double cells : {6.0, 12.0}) {
    const double eps = cells * g.spacing;
    const ScalarField u = ScalarField::from_function(g, [&](double, double y) { return optimal_profile_value(-y, eps); });
    const Gradient gr = gradient(u);
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (std::abs(g.x(i)) >= half || std::abs(g.y(j)) >= half) continue;
        const double n2 = gr.dx(i, j) * gr.dx(i, j) + gr.dy(i, j) * gr.dy(i, j);
        e += (double_well(u(i, j)) / eps + eps * n2) * g.cell_area();
      }
    MESSAGE("eps = " << cells << " cells, energy per length " << e / ell);
    CHECK(e / ell == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("sharp disk costs more than its mollified version") {
  const GridSpec g = GridSpec::centered(128, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 0.95));
  const double eps = 6 * g.spacing;
  const BinaryPattern D = testing::disk(g, 0, 0, 0.5);
  CHECK(modica_mortola(D.bitmap(), eps, spec).value() > modica_mortola(mollified_indicator(D, eps, spec.domain), eps, spec).value());
}

TEST_CASE("sigmoid family: P_eps is unimodal in eps near the profile width") {
  const GridSpec g = GridSpec::centered(128, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 0.95));
  const double w = 8 * g.spacing;
  const ScalarField u = sigmoid_disk(spec.domain, 0.5, w);
  std::vector<double> vals;
  for (int k = -6; k <= 6; ++k) vals.push_back(modica_mortola(u, w * std::pow(2.0, k / 3.0), spec).value());
  const auto it = std::min_element(vals.begin(), vals.end());
  const auto m = it - vals.begin();
  CHECK(m > 0);
  CHECK(m < static_cast<long>(vals.size()) - 1);
  CHECK(std::abs(m - 6) <= 1);
  for (long k = 0; k < m; ++k) CHECK(vals[k] > vals[k + 1]);
  for (long k = m; k + 1 < static_cast<long>(vals.size()); ++k) CHECK(vals[k] < vals[k + 1]);
}

TEST_CASE("sigmoid disk energy approaches 2 pi rho") {
  const GridSpec g = GridSpec::centered(256, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 1.0 - 2 * g.spacing));
  const double rho = 0.5;
  for (double cells : {32.0, 16.0, 8.0}) {
    const double eps = cells * g.spacing;
    const double P = modica_mortola(sigmoid_disk(spec.domain, rho, eps), eps, spec).value();
    CHECK(P == doctest::Approx(2 * std::numbers::pi * rho).epsilon(0.05));
  }
}

TEST_CASE("mollified indicator: range, support, level set") {
  const GridSpec g = GridSpec::centered(64, 1.0);
  const PhaseDomain d = PhaseDomain::disk(g, 0.9);
  const BinaryPattern D = testing::disk(g, 0, 0, 0.4);
  const ScalarField u = mollified_indicator(D, 0.1, d);
  CHECK(d.supports(u));
  CHECK(u.min() >= 0.0);
  CHECK(u.max() <= 1.0);
  CHECK(count_components(BinaryPattern::threshold(u, 0.5)) == 1);
  CHECK(std::abs(BinaryPattern::threshold(u, 0.5).area() - D.area()) <= 4 * g.cell_area());
  CHECK(mollified_indicator(BinaryPattern(ScalarField(g)), 0.1, d).max_abs() == 0.0);
}

}  // TEST_SUITE
