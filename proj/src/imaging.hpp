#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contour.hpp"
#include "fft.hpp"
#include "field.hpp"
#include "kernels.hpp"

namespace litho {

enum class PsfModel {
  smoothed,  // K = T_{s s0}, the default
  jinc,      // classical K = Jinc_s, for comparison runs
  gaussian,  // K = G_{s s0}; closed-form calibrations
};

enum class Coherence {
  full,     // J == 1: I = (K * u)^2
  partial,  // J(x) = 2 J1(k sigma NA |x|) / (k sigma NA |x|), dense quadratic form
};

enum class SupportRegion {
  disk,    // masks must vanish outside B_R
  window,  // any mask on the window (half-plane calibrations)
};

struct OpticsConfig {
  double k = 4.0;       // wavenumber
  double na = 0.8;      // numerical aperture
  double sigma = 0.078125;  // coherency coefficient, 0 < sigma <= s
  double h = 0.5;       // exposure threshold
  double eta = 0.1;     // threshold smoothing width
  PsfModel psf = PsfModel::smoothed;
  Coherence coherence = Coherence::full;
  SupportRegion support = SupportRegion::disk;
  double delta_tilde = 0.05;   // target ||T - G||_{W^{1,1}}
  PsfSearchBudget psf_budget{};
  double gaussian_s0 = 0.125;  // s0 used by the Gaussian model
  bool allow_large_dense = false;
  int dense_limit = 96;        // side length above which the dense path needs opt-in

  double s() const { return 1.0 / (k * na); }
  // k sigma NA = sigma / s
  double coherence_frequency() const { return k * sigma * na; }

  // Aggregated invariant violations; empty when valid.
  std::vector<std::string> validate() const;
  // Allowed but outside the range covered by the theory.
  std::vector<std::string> warnings() const;
};

struct CoherenceGap {
  double gap = 0.0;    // sup |P_J(u) - P_1(u)| on the grid
  double bound = 0.0;  // ||K||_{L1}^2 * sup_{|x| <= 2R} |J(x) - 1|
  double epsilon_j = 0.0;
};

// Forward model on a fixed grid. Construction samples the optical kernels once;
// evaluation is const and thread-safe.
class Imager {
 public:
  // `psf` reuses a previously built smoothed kernel; otherwise one is built.
  Imager(const OpticsConfig& cfg, const GridSpec& grid, std::optional<SmoothedPsf> psf = std::nullopt);
  ~Imager();
  Imager(const Imager&) = delete;
  Imager& operator=(const Imager&) = delete;

  const OpticsConfig& config() const { return cfg_; }
  const GridSpec& grid() const { return grid_; }
  const SampledKernel& psf_kernel() const { return k_; }
  // Null unless psf == smoothed.
  const SmoothedPsf* smoothed_psf() const { return psf_ ? &*psf_ : nullptr; }
  // Spatial scale of K: s * s0.
  double kernel_scale() const { return kernel_scale_; }
  double padding() const { return 4.0 * kernel_scale_; }
  // Radius of B_R: window half-width minus padding.
  double domain_radius() const { return domain_radius_; }
  // 1 inside the region where masks may be nonzero.
  const ScalarField& support_mask() const { return support_mask_; }

  // Throws DomainError if u is nonzero outside the support region or leaves [0, 1].
  void check_mask(const ScalarField& u) const;

  // v = K * u.
  ScalarField coherent_field(const ScalarField& u) const;
  // Hopkins intensity according to cfg.coherence.
  ScalarField intensity(const ScalarField& u) const;
  // Gradient of sum_x w(x) I(u)(x) with respect to the samples of u.
  ScalarField intensity_vjp(const ScalarField& u, const ScalarField& w) const;

  // Dense quadratic form; `unit_coherence` replaces J by 1.
  ScalarField intensity_dense(const ScalarField& u, bool unit_coherence = false) const;
  ScalarField intensity_dense_vjp(const ScalarField& u, const ScalarField& w, bool unit_coherence = false) const;

  // sup over grid offsets within 2R of |J - 1|; 0 for full coherence.
  double coherence_epsilon() const;
  CoherenceGap coherence_gap(const ScalarField& u) const;

 private:
  struct Dense;
  void require_dense() const;
  const Dense& dense(bool unit) const;
  void dense_pass(const ScalarField& u, bool unit, ScalarField* intensity, const ScalarField* w,
                  ScalarField* grad) const;

  OpticsConfig cfg_;
  GridSpec grid_;
  std::optional<SmoothedPsf> psf_;
  SampledKernel k_;
  std::unique_ptr<Convolver> conv_;
  double kernel_scale_ = 0.0;
  double domain_radius_ = 0.0;
  ScalarField support_mask_;
  std::unique_ptr<SampledKernel> j_;
  mutable std::unique_ptr<Dense> dense_j_;
  mutable std::unique_ptr<Dense> dense_one_;
};

// Omega = {I > h} by cell centres; contour from marching squares on I at level h.
BinaryPattern exposed_set(const ScalarField& intensity, double h);

// phi((I - h) / eta) with the smooth Heaviside; 1 wherever I >= h + eta / 2.
ScalarField smoothed_exposure(const ScalarField& intensity, double h, double eta);

}  // namespace litho
