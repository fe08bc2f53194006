// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
// Exit status is 0 once every criterion has been evaluated; --strict makes any
// FAIL a nonzero exit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "contour.hpp"
#include "fft.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "kernels.hpp"
#include "optimize.hpp"
#include "phasefield.hpp"

using namespace litho;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const SmoothedPsf& default_psf() {
  static const SmoothedPsf psf = build_smoothed_psf(0.05);
  return psf;
}

ScalarField disk_field(const GridSpec& g, double cx, double cy, double r) {
  return ScalarField::from_function(g, [&](double x, double y) { return std::hypot(x - cx, y - cy) <= r ? 1.0 : 0.0; });
}

ScalarField square_field(const GridSpec& g, double cx, double cy, double a) {
  return ScalarField::from_function(
      g, [&](double x, double y) { return std::abs(x - cx) < 0.5 * a && std::abs(y - cy) < 0.5 * a ? 1.0 : 0.0; });
}

// Union of three random disks, restricted to the imager's support.
ScalarField random_mask(const Imager& im, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-0.45, 0.45), R(0.08, 0.3);
  ScalarField u(im.grid());
  for (int d = 0; d < 3; ++d) u += disk_field(im.grid(), U(rng), U(rng), R(rng));
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::min(u[k], 1.0) * im.support_mask()[k];
  return u;
}

// |signed distance| from cell centres to the boundary of a bitmap (exact for
// axis-aligned edges, which sit half a cell beyond the last centre).
ScalarField boundary_distance(const BinaryPattern& p) {
  ScalarField comp(p.grid());
  for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = 1.0 - p.bitmap()[k];
  const ScalarField din = distance_transform(p);
  const ScalarField dout = distance_transform(BinaryPattern(comp));
  ScalarField d(p.grid());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (p.bitmap()[k] != 0.0 ? dout[k] : din[k]) - 0.5 * p.grid().spacing;
  return d;
}

// 1. c_p and the p = 2 reduction.
void c1(Verdict& v) {
  const double cp = compute_cp(DoubleWell{}, 2.0);
  v.detail << "c_p = " << cp;
  v.require(std::abs(cp - 2.0) <= 1e-6, "|c_p - 2| <= 1e-6");
  const GridSpec g = GridSpec::centered(64, 1.0);
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::rectangle(g, -1, -1, 1, 1));
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    ScalarField u(g);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = U(rng) * spec.domain.allowed[k];
    const double eps = 0.02 + 0.03 * t;
    const MMTerms m = modica_mortola_terms(u, 2.0);
    const double classic = m.well / eps + eps * m.gradient;
    const double mm = modica_mortola(u, eps, spec).value();
    worst = std::max(worst, std::abs(mm - classic) / std::max(1.0, std::abs(classic)));
  }
  v.detail << ", max relative termwise gap " << worst;
  v.require(worst <= 1e-9, "reduction within 1e-9");
}

// 2. Sigmoid-profile energy of a disk against 2 pi rho on a fixed 256^2 grid.
void c2(Verdict& v) {
  const GridSpec g = GridSpec::centered(256, 1.0);
  const double h = g.spacing, rho = 0.25 * g.width();
  const PhaseFieldSpec spec = PhaseFieldSpec::make(PhaseDomain::disk(g, 1.0 - 2 * h));
  std::vector<double> errs;
  for (double cells : {32.0, 16.0, 8.0}) {
    const double eps = cells * h;
    ScalarField u = ScalarField::from_function(g, [&](double x, double y) { return optimal_profile_value(rho - std::hypot(x, y), eps); });
    for (std::size_t k = 0; k < u.size(); ++k) u[k] *= spec.domain.allowed[k];
    const double P = modica_mortola(u, eps, spec).value();
    errs.push_back(std::abs(P / (2 * kPi * rho) - 1.0));
  }
  v.detail << "relative errors at eps = 32h, 16h, 8h: " << errs[0] << ", " << errs[1] << ", " << errs[2];
  v.require(*std::max_element(errs.begin(), errs.end()) <= 0.05, "within 5%");
  v.require(errs[1] < errs[0] && errs[2] < errs[1], "monotone error decrease");
}

// 3. DFT of the sampled Jinc against the unit-disk indicator.
void c3(Verdict& v) {
  const int n = 512;
  const double h = 2.0;
  const SampledKernel j = jinc(h, n * h / 2.0);
  RealFft2d fft(n, n);
  RealFft2d::Workspace ws(fft);
  const int m = j.half_width();
  std::fill(ws.real(), ws.real() + n * n, 0.0);
  for (int dy = -m; dy <= m; ++dy)
    for (int dx = -m; dx <= m; ++dx) {
      if (dx == m || dy == m) continue;
      ws.real()[((dy + n) % n) * n + (dx + n) % n] = j.at_offset(dx, dy) * h * h;
    }
  fft.forward(ws);
  double err = 0.0, ref = 0.0;
  for (int q = 0; q < n; ++q)
    for (int p = 0; p <= n / 2; ++p) {
      const int pq = q <= n / 2 ? q : q - n;
      const double chi = 2 * kPi / (n * h) * std::hypot(p, pq) < 1.0 ? 1.0 : 0.0;
      const double w = (p == 0 || p == n / 2) ? 1.0 : 2.0;
      const double val = ws.spectrum()[q * (n / 2 + 1) + p].real();
      err += w * (val - chi) * (val - chi);
      ref += w * chi;
    }
  const double rel = std::sqrt(err / ref);
  v.detail << "relative L2 spectrum error " << rel;
  v.require(rel < 0.05, "< 5%");
}

// 4. Smoothed PSF: deviation verified on a grid, flat top, monotone profile.
void c4(Verdict& v) {
  const SmoothedPsf& T = default_psf();
  v.detail << "s0 = " << T.s0 << ", b = " << T.b << ", quadrature deviation " << T.deviation;
  const int n = 512;
  const double h = 0.5;
  const GridSpec grid = GridSpec::centered(n, n * h / 2);
  const ScalarField d = ScalarField::from_function(grid, [&](double x, double y) {
    const double r = std::hypot(x, y);
    return T.spatial(r) - std::exp(-r * r / 2) / (2 * kPi);
  });
  double l1 = 0.0;
  for (double x : d.values()) l1 += std::abs(x);
  const double w11 = l1 * grid.cell_area() + total_variation(d);
  v.detail << ", grid oracle " << w11;
  v.require(T.deviation <= 0.05 && w11 <= 0.05, "W11 deviation <= 0.05");
  bool flat = true;
  for (int k = 0; k <= 1000; ++k) flat = flat && T.fourier(T.s0 * k / 1000.0) == 1.0;
  v.require(flat, "T^ == 1 on B_s0");
  bool mono = true;
  double prev = 1.0;
  for (int k = 0; k <= 20000; ++k) {
    const double x = T.fourier(k * 0.0005);
    mono = mono && x <= prev;
    prev = x;
  }
  v.require(mono, "T^ radially nonincreasing");
}

// 5. Dense quadratic form with J == 1 against (K * u)^2.
void c5(Verdict& v) {
  OpticsConfig c;
  c.coherence = Coherence::partial;
  Imager im(c, GridSpec::centered(64, 1.0), default_psf());
  std::mt19937_64 rng(105);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const ScalarField u = random_mask(im, rng);
    const ScalarField dense = im.intensity_dense(u, true);
    const ScalarField vv = im.coherent_field(u);
    double err = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) err = std::max(err, std::abs(dense[k] - vv[k] * vv[k]));
    worst = std::max(worst, err / dense.max_abs());
  }
  v.detail << "max relative difference " << worst;
  v.require(worst <= 1e-6, "<= 1e-6");
}

// 6. Partial coherence gap against ||T||_1^2 sup |J - 1|.
void c6(Verdict& v) {
  const GridSpec g = GridSpec::centered(64, 1.0);
  OpticsConfig c;
  c.coherence = Coherence::partial;
  c.sigma = c.s() / 4;
  Imager im(c, g, default_psf());
  const double bound = default_psf().l1_norm * default_psf().l1_norm * im.coherence_epsilon();
  std::mt19937_64 rng(106);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) worst = std::max(worst, im.coherence_gap(random_mask(im, rng)).gap);
  v.detail << "max gap " << worst << " vs bound " << bound;
  v.require(worst <= bound + 1e-6, "gap <= bound");
  std::mt19937_64 fixed(206);
  const ScalarField u = random_mask(im, fixed);
  std::vector<double> gaps;
  for (double f : {0.5, 0.25, 0.125, 0.0625}) {
    OpticsConfig cs = c;
    cs.sigma = f * c.s();
    gaps.push_back(Imager(cs, g, default_psf()).coherence_gap(u).gap);
  }
  v.detail << "; gaps at sigma = s/2..s/16:";
  for (double x : gaps) v.detail << " " << x;
  bool mono = true;
  for (std::size_t k = 1; k < gaps.size(); ++k) mono = mono && gaps[k] < gaps[k - 1];
  v.require(mono, "gap monotone in sigma");
}

// 7. Half-plane mask at h = 1/4.
void c7(Verdict& v) {
  const GridSpec g = GridSpec::centered(256, 1.0);
  OpticsConfig c;
  c.h = 0.25;
  c.support = SupportRegion::window;
  Imager im(c, g, default_psf());
  const ScalarField u = ScalarField::from_function(g, [](double, double y) { return y < 0 ? 1.0 : 0.0; });
  const BinaryPattern om = exposed_set(im.intensity(u), c.h);
  // Stay clear of the window's left and right edges, where the mask is cut.
  const double keep = 1.0 - 8 * im.kernel_scale();
  double worst = 0.0;
  for (const auto& loop : om.contour())
    for (const Point& p : loop)
      if (std::abs(p.x) < keep && std::abs(p.y) < 0.5) worst = std::max(worst, std::abs(p.y));
  v.detail << "max |y| on the recovered boundary " << worst << " (cell " << g.spacing << ")";
  v.require(worst <= g.spacing, "within one cell");
}

// 8. Transition band and component counts.
void c8(Verdict& v) {
  const GridSpec g = GridSpec::centered(256, 1.0);
  Imager im(OpticsConfig{}, g, default_psf());
  const double w = im.kernel_scale();
  std::vector<std::pair<const char*, ScalarField>> shapes = {
      {"disk 0.4", disk_field(g, 0, 0, 0.4)},
      {"disk of diameter 8ss0", disk_field(g, 0, 0, 4 * w)},
      {"square 0.8", square_field(g, 0, 0, 0.8)},
      {"square of side 8ss0", square_field(g, 0, 0, 8 * w)},
      {"two disks", disk_field(g, -0.4, 0, 0.2) + disk_field(g, 0.4, 0, 0.2)},
      {"two squares", square_field(g, -0.35, 0, 0.3) + square_field(g, 0.35, 0, 0.3)},
  };
  double worst = 0.0;
  for (const auto& [name, f] : shapes) {
    const BinaryPattern d(f);
    const ScalarField I = im.intensity(f);
    const ScalarField dist = boundary_distance(d);
    double reach = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (I[k] > 0.1 && I[k] < 0.9) reach = std::max(reach, dist[k]);
    worst = std::max(worst, reach / w);
    const int cd = count_components(d), co = count_components(exposed_set(I, im.config().h));
    v.require(cd == co, std::string(name) + ": component count " + std::to_string(co) + " vs " + std::to_string(cd));
  }
  v.detail << "max band reach " << worst << " s s0";
  v.require(worst <= 2.0, "band within 2 s s0");
}

// 9. Coarea identity for the smoothed exposure.
void c9(Verdict& v) {
  const GridSpec g = GridSpec::centered(256, 1.0);
  Imager im(OpticsConfig{}, g, default_psf());
  const ScalarField I = im.intensity(disk_field(g, 0, 0, 0.4));
  const double h = im.config().h, eta = im.config().eta;
  const double tv = total_variation(smoothed_exposure(I, h, eta));
  double rhs = 0.0;
  const int n = 400;
  for (int k = 0; k < n; ++k) {
    const double t = -0.5 + (k + 0.5) / n;
    rhs += smooth_heaviside_derivative(t) * perimeter(exposed_set(I, h + t * eta)) / n;
  }
  const double rel = std::abs(tv - rhs) / rhs;
  v.detail << "TV " << tv << ", coarea integral " << rhs << ", relative gap " << rel;
  v.require(rel <= 0.05, "within 5%");
}

// 10. Analytic gradient against central differences.
void c10(Verdict& v) {
  double worst = 0.0;
  for (Coherence mode : {Coherence::full, Coherence::partial}) {
    OpticsConfig c;
    c.coherence = mode;
    Imager im(c, GridSpec::centered(48, 1.0), default_psf());
    const BinaryPattern D(disk_field(im.grid(), 0.05, -0.05, 0.3));
    const Problem pb(im, D, ObjectiveConfig{});
    const double eps = pb.obj.eps_schedule[1];
    std::mt19937_64 rng(110);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ScalarField u = mollified_indicator(D, 2 * eps, pb.phase.domain);
    for (std::size_t k = 0; k < u.size(); ++k)
      u[k] = std::clamp(u[k] + 0.2 * U(rng) - 0.1, 0.02, 0.98) * pb.phase.domain.allowed[k];
    const ScalarField gr = gradient_F_eps(u, pb, eps);
    const double F = F_eps(u, pb, eps).value();
    for (int t = 0; t < 10; ++t) {
      ScalarField d(im.grid());
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = (2 * U(rng) - 1) * pb.phase.domain.allowed[k];
      const double step = 1e-5;
      ScalarField up = u, um = u;
      axpy(step, d, up);
      axpy(-step, d, um);
      const double fd = (F_eps(up, pb, eps).value() - F_eps(um, pb, eps).value()) / (2 * step);
      worst = std::max(worst, std::abs(dot(gr, d) - fd) / (1 + std::abs(F)));
    }
  }
  v.detail << "max |<grad F, d> - FD| / (1 + |F|) = " << worst << " over 20 directions (coherent and dense)";
  v.require(worst <= 1e-4, "<= 1e-4");
}

// 11. Gamma-continuation on disk and square targets.
void c11(Verdict& v) {
  const GridSpec g = GridSpec::centered(128, 1.0);
  Imager im(OpticsConfig{}, g, default_psf());
  for (const auto& [name, f] : {std::pair{"disk", disk_field(g, 0, 0, 0.4)}, std::pair{"square", square_field(g, 0, 0, 0.8)}}) {
    const Problem pb(im, BinaryPattern(f), ObjectiveConfig{});
    const SweepTrace tr = gamma_sweep(pb);
    bool mono = true;
    for (const auto& r : tr.records)
      for (std::size_t k = 1; k < r.log.size(); ++k) mono = mono && r.log[k].F <= r.log[k - 1].F;
    double C1 = 0.0, Fmax = 0.0;
    for (const auto& r : tr.records) {
      C1 = std::max(C1, F_eps(mollified_indicator(pb.target, r.eps, pb.phase.domain), pb, r.eps).value());
      Fmax = std::max(Fmax, r.F);
    }
    bool cauchy = true;
    for (std::size_t k = 2; k < tr.records.size(); ++k) cauchy = cauchy && tr.records[k].l1_step < tr.records[k - 1].l1_step;
    v.detail << name << ": max F_eps(u_eps) " << Fmax << " <= C1 " << C1 << ", d3 " << tr.final_report.d3 << " vs identity "
             << tr.identity_report.d3 << ", L1 steps";
    for (const auto& r : tr.records) v.detail << " " << r.l1_step;
    v.detail << "; ";
    const std::string n(name);
    v.require(mono, n + ": monotone F within each minimization");
    v.require(Fmax <= C1, n + ": F_eps(u_eps) bounded by the mollified-target constant");
    v.require(tr.final_report.d3 <= tr.identity_report.d3, n + ": optimized mask beats the identity mask");
    v.require(cauchy, n + ": L1 steps decrease over the tail");
  }
}

// 12. Metric axioms, d2 against perimeter * d1~, comb topology gap.
void c12(Verdict& v) {
  const GridSpec g = GridSpec::centered(128, 1.0);
  std::mt19937_64 rng(112);
  std::uniform_real_distribution<double> U(-0.4, 0.4), R(0.1, 0.35);
  std::vector<BinaryPattern> ps;
  ps.emplace_back(disk_field(g, U(rng), U(rng), R(rng)));
  ps.emplace_back(square_field(g, U(rng), U(rng), 2 * R(rng)));
  ps.emplace_back(disk_field(g, U(rng), U(rng), R(rng)) + disk_field(g, 0.5, 0.5, 0.1));
  auto all = [](const BinaryPattern& a, const BinaryPattern& b) {
    const DistanceReport r = strict_distance(a, b);
    return std::array<double, 4>{r.d1.value(), r.d1_tilde.value(), r.d2, r.d3};
  };
  bool sym = true, tri = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto ij = all(ps[i], ps[j]), ji = all(ps[j], ps[i]);
      for (int m = 0; m < 4; ++m) sym = sym && ij[m] == ji[m];
      for (int k = 0; k < 3; ++k) {
        const auto ik = all(ps[i], ps[k]), kj = all(ps[k], ps[j]);
        for (int m = 0; m < 4; ++m) tri = tri && ij[m] <= ik[m] + kj[m] + 1e-9;
      }
    }
  v.require(sym, "exact symmetry");
  v.require(tri, "triangle inequality");

  // Smooth pairs at small boundary distance: concentric, shifted and wavy disks.
  const GridSpec f = GridSpec::centered(256, 1.0);
  constexpr double kFrozenC = 1.5;
  double ratio_max = 0.0, c_emp = 0.0;
  bool d1_le = true;
  auto wavy = [&](double r0, double a, int k, double cx) {
    return BinaryPattern(ScalarField::from_function(f, [&](double x, double y) {
      const double th = std::atan2(y, x - cx);
      return std::hypot(x - cx, y) <= r0 * (1 + a * std::cos(k * th)) ? 1.0 : 0.0;
    }));
  };
  const std::vector<std::pair<BinaryPattern, BinaryPattern>> pairs = {
      {BinaryPattern(disk_field(f, 0, 0, 0.4)), BinaryPattern(disk_field(f, 0, 0, 0.45))},
      {BinaryPattern(disk_field(f, 0, 0, 0.4)), BinaryPattern(disk_field(f, 0.05, 0, 0.4))},
      {BinaryPattern(disk_field(f, 0, 0, 0.3)), BinaryPattern(disk_field(f, 0.03, 0.02, 0.32))},
      {wavy(0.4, 0.05, 5, 0.0), BinaryPattern(disk_field(f, 0, 0, 0.4))},
      {wavy(0.35, 0.08, 3, 0.0), wavy(0.35, 0.08, 3, 0.04)},
  };
  for (const auto& [a, b] : pairs) {
    const DistanceReport r = strict_distance(a, b);
    const double d1 = r.d1.value(), dt = r.d1_tilde.value();
    d1_le = d1_le && d1 <= dt + 1e-12;
    ratio_max = std::max(ratio_max, dt / d1);
    c_emp = std::max(c_emp, r.d2 / (std::min(r.perimeter_a, r.perimeter_b) * dt));
  }
  v.detail << "symmetry exact, triangle ok; d1~/d1 <= " << ratio_max << ", d2/(min P d1~) <= " << c_emp << " (frozen C "
           << kFrozenC << ")";
  v.require(d1_le, "d1 <= d1~ on smooth pairs");
  v.require(c_emp <= kFrozenC, "d2 <= C min(P) d1~");

  // Combs: eight teeth of height 0.3 whose width shrinks to one cell.
  const double h = f.spacing;
  std::vector<double> d2s, dps;
  for (int cells : {8, 4, 2, 1}) {
    ScalarField base = ScalarField::from_function(f, [](double x, double y) { return std::abs(x) < 0.5 && y > -0.3 && y < 0.0 ? 1.0 : 0.0; });
    ScalarField comb = base;
    for (int t = 0; t < 8; ++t) {
      const double x0 = -0.45 + 0.125 * t;
      for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i)
          if (f.x(i) > x0 && f.x(i) < x0 + cells * h && f.y(j) >= 0.0 && f.y(j) < 0.3) comb(i, j) = 1.0;
    }
    const DistanceReport r = strict_distance(BinaryPattern(comb), BinaryPattern(base));
    d2s.push_back(r.d2);
    dps.push_back(std::abs(r.perimeter_a - r.perimeter_b));
  }
  v.detail << "; comb d2:";
  for (double x : d2s) v.detail << " " << x;
  v.detail << ", |dP|:";
  for (double x : dps) v.detail << " " << x;
  bool shrinking = true;
  for (std::size_t k = 1; k < d2s.size(); ++k) shrinking = shrinking && d2s[k] < d2s[k - 1];
  // Each tooth adds two sides of length 0.3; smoothing shortens them slightly.
  const double floor = 0.5 * 8 * 2 * 0.3;
  v.require(shrinking, "comb d2 decreasing");
  v.require(*std::min_element(dps.begin(), dps.end()) >= floor, "comb |dP| bounded below");
  v.require(d2s.back() * 20 < dps.back(), "d3 >> d2 for the finest comb");
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  void (*run)(Verdict&);
};

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int k = 1; k < argc; ++k) strict = strict || std::strcmp(argv[k], "--strict") == 0;
  const Criterion all[] = {
      {1, "c_p calibration", 1, c1},
      {2, "Gamma-limit calibration", 10, c2},
      {3, "Jinc spectrum", 5, c3},
      {4, "smoothed-PSF contract", 30, c4},
      {5, "coherent consistency", 60, c5},
      {6, "coherence-gap bound", 300, c6},
      {7, "half-plane exposure calibration", 5, c7},
      {8, "boundary tube and topology", 30, c8},
      {9, "coarea identity", 30, c9},
      {10, "gradient correctness", 120, c10},
      {11, "end-to-end inversion", 900, c11},
      {12, "distance-web sanity", 60, c12},
  };
  int failed = 0;
  for (const auto& c : all) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < c.limit_s, "runtime limit " + std::to_string(static_cast<int>(c.limit_s)) + " s");
    failed += !v.pass;
    std::printf("%s %2d %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
  return strict && failed ? 1 : 0;
}
