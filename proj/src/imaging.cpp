#include "imaging.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"

namespace litho {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<std::string> OpticsConfig::validate() const {
  std::vector<std::string> e;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) e.push_back(std::string(name) + " must be positive and finite");
  };
  positive(k, "optics.k");
  positive(na, "optics.na");
  positive(eta, "optics.eta");
  positive(delta_tilde, "optics.delta_tilde");
  positive(gaussian_s0, "optics.gaussian_s0");
  if (!std::isfinite(h)) e.push_back("optics.h must be finite");
  if (coherence == Coherence::partial) {
    positive(sigma, "optics.sigma");
    if (k > 0.0 && na > 0.0 && sigma > s() * (1.0 + 1e-12))
      e.push_back("optics.sigma must not exceed s = 1/(k NA)");
  }
  if (dense_limit < 1) e.push_back("optics.dense_limit must be at least 1");
  if (psf_budget.s0_halvings < 0 || psf_budget.b0_doublings < 0) e.push_back("optics.psf_budget must be nonnegative");
  return e;
}

std::vector<std::string> OpticsConfig::warnings() const {
  std::vector<std::string> w;
  if (h < 1.0 / 3.0 || h > 2.0 / 3.0)
    w.push_back("threshold h outside [1/3, 2/3]: shape-regularity guarantees of the exposure model do not apply");
  return w;
}

struct Imager::Dense {
  std::unique_ptr<RealFft2d> fft;
  std::vector<std::complex<double>> spectrum;  // of J on offsets, unnormalised
};

Imager::Imager(const OpticsConfig& cfg, const GridSpec& grid, std::optional<SmoothedPsf> psf)
    : cfg_(cfg), grid_(grid) {
  auto errors = cfg.validate();
  if (grid.nx < 2 || grid.ny < 2 || !(grid.spacing > 0.0)) errors.push_back("grid must be at least 2x2 with positive spacing");
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid optics configuration:";
    for (const auto& m : errors) os << "\n  " << m;
    throw ConfigError(os.str());
  }
  const double s = cfg.s();
  const double h = grid.spacing;
  const double diag = std::hypot(grid.nx - 1, grid.ny - 1) * h;

  switch (cfg.psf) {
    case PsfModel::smoothed: {
      psf_ = psf ? std::move(psf) : std::optional<SmoothedPsf>(build_smoothed_psf(cfg.delta_tilde, smooth_cutoff,
                                                                                   cfg.psf_budget));
      if (s > 1.0 / psf_->s0 * (1.0 + 1e-12))
        throw ConfigError("optics: s = 1/(k NA) must not exceed 1/s0 of the smoothed kernel");
      kernel_scale_ = s * psf_->s0;
      k_ = sample_psf(*psf_, kernel_scale_, h, diag);
      break;
    }
    case PsfModel::jinc: {
      kernel_scale_ = s;
      const double inv2 = 1.0 / (s * s);
      k_ = sample_radial_kernel(
          KernelKind::jinc,
          [s, inv2](double r) {
            const double x = r / s;
            if (x < 1e-6) return inv2 * (0.5 - x * x / 16.0) / (2.0 * kPi);
            return inv2 * ::j1(x) / (2.0 * kPi * x);
          },
          [s](double rho) { return s * rho < 1.0 ? 1.0 : 0.0; }, h, diag);
      break;
    }
    case PsfModel::gaussian: {
      kernel_scale_ = s * cfg.gaussian_s0;
      k_ = gaussian(h, std::max(diag, 8.0 * kernel_scale_), kernel_scale_);
      break;
    }
  }
  // Point samples of a kernel narrower than half a cell do not integrate to its mass.
  if (kernel_scale_ < 0.5 * h)
    throw ConfigError("optics: kernel scale " + std::to_string(kernel_scale_) + " is below half the grid spacing; refine the grid");
  conv_ = std::make_unique<Convolver>(grid, k_.grid);

  const double half = 0.5 * std::min(grid.width(), grid.height());
  domain_radius_ = half - padding();
  support_mask_ = ScalarField(grid, 1.0);
  if (cfg.support == SupportRegion::disk) {
    if (!(domain_radius_ > h))
      throw ConfigError("optics: padding 4 s s0 leaves no room for the mask domain B_R inside the window");
    const double cx = grid.center_x(), cy = grid.center_y();
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        support_mask_(i, j) = std::hypot(grid.x(i) - cx, grid.y(j) - cy) <= domain_radius_ ? 1.0 : 0.0;
  }
  if (cfg.coherence == Coherence::partial)
    j_ = std::make_unique<SampledKernel>(mutual_intensity(cfg.coherence_frequency(), h, diag));
}

Imager::~Imager() = default;

void Imager::check_mask(const ScalarField& u) const {
  require_same_grid(u.grid(), grid_, "imaging");
  constexpr double tol = 1e-12;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = u[k];
    if (!(v >= -tol && v <= 1.0 + tol)) throw DomainError("mask values must lie in [0, 1]");
    if (support_mask_[k] == 0.0 && std::abs(v) > tol)
      throw DomainError("mask is nonzero outside the admissible region B_R");
  }
}

ScalarField Imager::coherent_field(const ScalarField& u) const {
  check_mask(u);
  return conv_->apply(u);
}

ScalarField Imager::intensity(const ScalarField& u) const {
  if (cfg_.coherence == Coherence::partial) return intensity_dense(u, false);
  ScalarField v = coherent_field(u);
  for (auto& x : v.values()) x *= x;
  return v;
}

ScalarField Imager::intensity_vjp(const ScalarField& u, const ScalarField& w) const {
  if (cfg_.coherence == Coherence::partial) return intensity_dense_vjp(u, w, false);
  require_same_grid(w.grid(), grid_, "intensity_vjp");
  ScalarField v = coherent_field(u);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 2.0 * v[k] * w[k];
  return conv_->apply_transpose(v);
}

void Imager::require_dense() const {
  const int lim = cfg_.dense_limit;
  if (!cfg_.allow_large_dense && (grid_.nx > lim || grid_.ny > lim)) {
    std::ostringstream os;
    os << "dense Hopkins evaluation on " << grid_.nx << "x" << grid_.ny << " exceeds " << lim << "x" << lim
       << " (set allow_large_dense to opt in)";
    throw ResourceError(os.str());
  }
}

const Imager::Dense& Imager::dense(bool unit) const {
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = unit ? dense_one_ : dense_j_;
  if (slot) return *slot;
  if (!unit && !j_) throw ConfigError("partial coherence kernel requested under full coherence");
  auto d = std::make_unique<Dense>();
  const int nx = grid_.nx, ny = grid_.ny;
  const int px = good_fft_size(2 * nx - 1);
  const int py = good_fft_size(2 * ny - 1);
  d->fft = std::make_unique<RealFft2d>(px, py);
  RealFft2d::Workspace ws(*d->fft);
  std::fill(ws.real(), ws.real() + static_cast<std::size_t>(px) * py, 0.0);
  for (int dy = -(ny - 1); dy <= ny - 1; ++dy)
    for (int dx = -(nx - 1); dx <= nx - 1; ++dx)
      ws.real()[static_cast<std::size_t>((dy + py) % py) * px + (dx + px) % px] = unit ? 1.0 : j_->at_offset(dx, dy);
  d->fft->forward(ws);
  d->spectrum.assign(ws.spectrum(), ws.spectrum() + d->fft->spectrum_size());
  slot = std::move(d);
  return *slot;
}

// For each output cell x: a(xi) = u(xi) K(x - xi), c = J * a (discrete sum),
// I(x) = h^4 sum a c. Since J is even, dI(x)/du(xi) = 2 h^4 K(x - xi) c(xi).
void Imager::dense_pass(const ScalarField& u, bool unit, ScalarField* intensity, const ScalarField* w,
                        ScalarField* grad) const {
  require_dense();
  check_mask(u);
  const Dense& d = dense(unit);
  const int nx = grid_.nx, ny = grid_.ny;
  const int px = d.fft->px(), py = d.fft->py();
  const std::size_t nspec = d.fft->spectrum_size();
  const double h2 = grid_.cell_area();
  const double h4 = h2 * h2;
  const double inv_n = 1.0 / (static_cast<double>(px) * py);
  const std::size_t ncell = grid_.size();

  std::vector<std::size_t> support;  // cells where u != 0
  for (std::size_t k = 0; k < ncell; ++k)
    if (u[k] != 0.0) support.push_back(k);

  const int chunks = thread_count();
  std::vector<std::vector<double>> partial(grad ? static_cast<std::size_t>(chunks) : 0);
  parallel_chunks(ncell, [&](std::size_t begin, std::size_t end, int chunk) {
    RealFft2d::Workspace ws(*d.fft);
    double* buf = ws.real();
    std::vector<double> a(ncell, 0.0);
    std::vector<double>* g = nullptr;
    if (grad) {
      partial[static_cast<std::size_t>(chunk)].assign(ncell, 0.0);
      g = &partial[static_cast<std::size_t>(chunk)];
    }
    for (std::size_t x = begin; x < end; ++x) {
      const double wx = w ? (*w)[x] : 0.0;
      if (!intensity && wx == 0.0) continue;
      const int xi = static_cast<int>(x % static_cast<std::size_t>(nx));
      const int xj = static_cast<int>(x / static_cast<std::size_t>(nx));
      std::fill(buf, buf + static_cast<std::size_t>(px) * py, 0.0);
      for (std::size_t k : support) {
        const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
        const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
        a[k] = u[k] * k_.at_offset(xi - i, xj - j);
        buf[static_cast<std::size_t>(j) * px + i] = a[k];
      }
      d.fft->forward(ws);
      std::complex<double>* sp = ws.spectrum();
      for (std::size_t q = 0; q < nspec; ++q) sp[q] *= d.spectrum[q];
      d.fft->inverse(ws);
      double sum = 0.0;
      for (std::size_t k : support) {
        const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
        const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
        const double c = buf[static_cast<std::size_t>(j) * px + i] * inv_n;
        sum += a[k] * c;
        if (g) (*g)[k] += wx * 2.0 * h4 * k_.at_offset(xi - i, xj - j) * c;
      }
      if (intensity) (*intensity)[x] = h4 * sum;
    }
  });
  if (grad) {
    *grad = ScalarField(grid_);
    for (const auto& p : partial)
      for (std::size_t k = 0; k < p.size(); ++k) (*grad)[k] += p[k];
  }
  (void)ny;
}

ScalarField Imager::intensity_dense(const ScalarField& u, bool unit_coherence) const {
  ScalarField out(grid_);
  dense_pass(u, unit_coherence, &out, nullptr, nullptr);
  return out;
}

ScalarField Imager::intensity_dense_vjp(const ScalarField& u, const ScalarField& w, bool unit_coherence) const {
  require_same_grid(w.grid(), grid_, "intensity_vjp");
  ScalarField g;
  dense_pass(u, unit_coherence, nullptr, &w, &g);
  return g;
}

double Imager::coherence_epsilon() const {
  if (!j_) return 0.0;
  const double reach = cfg_.support == SupportRegion::disk ? 2.0 * domain_radius_
                                                            : std::hypot(grid_.nx - 1, grid_.ny - 1) * grid_.spacing;
  const int m = j_->half_width();
  double eps = 0.0;
  for (int dy = -m; dy <= m; ++dy)
    for (int dx = -m; dx <= m; ++dx)
      if (std::hypot(dx, dy) * grid_.spacing <= reach * (1.0 + 1e-12))
        eps = std::max(eps, std::abs(j_->at_offset(dx, dy) - 1.0));
  return eps;
}

CoherenceGap Imager::coherence_gap(const ScalarField& u) const {
  require_dense();
  CoherenceGap r;
  if (!j_) return r;
  const ScalarField pj = intensity_dense(u, false);
  ScalarField p1 = coherent_field(u);
  for (auto& x : p1.values()) x *= x;
  for (std::size_t k = 0; k < pj.size(); ++k) r.gap = std::max(r.gap, std::abs(pj[k] - p1[k]));
  r.epsilon_j = coherence_epsilon();
  r.bound = k_.l1_norm * k_.l1_norm * r.epsilon_j;
  return r;
}

BinaryPattern exposed_set(const ScalarField& intensity, double h) {
  ScalarField b(intensity.grid());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = intensity[k] > h ? 1.0 : 0.0;
  return BinaryPattern(std::move(b), marching_squares(intensity, h));
}

ScalarField smoothed_exposure(const ScalarField& intensity, double h, double eta) {
  if (!(eta > 0.0)) throw DomainError("smoothed_exposure: eta must be positive");
  ScalarField out(intensity.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = smooth_heaviside((intensity[k] - h) / eta);
  return out;
}

}  // namespace litho
