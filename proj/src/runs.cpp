#include "runs.hpp"

#include <cstdio>

#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "optimize.hpp"
#include "parallel.hpp"

namespace litho {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path cache_dir(const RunConfig& cfg) {
  return cfg.kernel_cache.empty() ? fs::path(cfg.output) / "kernel" : fs::path(cfg.kernel_cache);
}

BinaryPattern load_pattern(const std::string& path, const GridSpec& grid) {
  if (path.empty()) throw ConfigError("no input pattern given");
  return BinaryPattern::threshold(read_mask(path, grid), 0.5);
}

// Collects outputs and their hashes, then writes the manifest.
class Outputs {
 public:
  Outputs(const RunConfig& cfg, const char* command) : cfg_(cfg), dir_(cfg.output), command_(command) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    hash_ = config_hash(cfg);
  }

  const std::string& hash() const { return hash_; }
  json sidecar() const { return {{"config_hash", hash_}, {"command", command_}}; }
  fs::path path(const std::string& name) const { return dir_ / name; }

  void text(const std::string& name, const std::string& content) {
    write_file(path(name), content);
    add(name);
  }
  void pgm16(const std::string& name, const ScalarField& f) {
    write_pgm16(path(name), f, sidecar());
    add(name);
    add(name + ".json");
  }
  void bitmap(const std::string& name, const BinaryPattern& p) {
    write_pgm_bitmap(path(name), p, sidecar());
    add(name);
    add(name + ".json");
  }
  void input(const std::string& p) {
    if (!p.empty()) inputs_[p] = git_blob_hash(read_file(p));
  }

  void manifest(RunOutcome& out, json results) {
    json outputs = json::object();
    for (const auto& f : out.files) outputs[f] = git_blob_hash(read_file(path(f)));
    const json m = {{"command", command_},
                    {"version", kVersion},
                    {"config", to_json(cfg_)},
                    {"config_hash", hash_},
                    {"threads_used", thread_count()},
                    {"inputs", inputs_},
                    {"outputs", outputs},
                    {"status", static_cast<int>(out.status)},
                    {"warnings", out.warnings},
                    {"results", std::move(results)}};
    write_file(path("manifest.json"), m.dump(2) + "\n");
    out.files.push_back("manifest.json");
  }

  RunOutcome outcome;

 private:
  void add(const std::string& name) { outcome.files.push_back(name); }

  const RunConfig& cfg_;
  fs::path dir_;
  std::string command_;
  std::string hash_;
  json inputs_ = json::object();
};

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
}

json report_json(const DistanceReport& r) {
  return {{"d1", r.d1.to_string()},
          {"d1_tilde", r.d1_tilde.to_string()},
          {"d2", r.d2},
          {"d3", r.d3},
          {"perimeter_a", r.perimeter_a},
          {"perimeter_b", r.perimeter_b}};
}

}  // namespace

std::unique_ptr<Imager> make_imager(const RunConfig& cfg) {
  const GridSpec grid = cfg.grid.spec();
  if (cfg.optics.psf != PsfModel::smoothed) return std::make_unique<Imager>(cfg.optics, grid);
  if (!cfg.kernel_cache.empty()) {
    if (auto psf = read_kernel_cache(cfg.kernel_cache, cfg.optics.delta_tilde, cfg.optics.psf_budget))
      return std::make_unique<Imager>(cfg.optics, grid, std::move(psf));
    SmoothedPsf psf = build_smoothed_psf(cfg.optics.delta_tilde, smooth_cutoff, cfg.optics.psf_budget);
    write_kernel_cache(cfg.kernel_cache, psf, cfg.optics.psf_budget);
    return std::make_unique<Imager>(cfg.optics, grid, std::move(psf));
  }
  return std::make_unique<Imager>(cfg.optics, grid);
}

RunOutcome run_forward(const RunConfig& cfg) {
  apply_threads(cfg);
  const GridSpec grid = cfg.grid.spec();
  if (cfg.input.empty()) throw ConfigError("forward: no mask given");
  const ScalarField mask = read_mask(cfg.input, grid);
  const auto im = make_imager(cfg);
  const ScalarField I = im->intensity(mask);
  const BinaryPattern om = exposed_set(I, cfg.optics.h);

  Outputs out(cfg, "forward");
  out.outcome.warnings = cfg.optics.warnings();
  out.input(cfg.input);
  out.pgm16("intensity.pgm", I);
  out.text("intensity.csv", field_csv(I));
  out.pgm16("smoothed_exposure.pgm", smoothed_exposure(I, cfg.optics.h, cfg.optics.eta));
  out.bitmap("exposure.pgm", om);
  json cj = contour_json(om);
  cj["config_hash"] = out.hash();
  out.text("exposure_contour.json", cj.dump(2) + "\n");

  const json results = {{"intensity_min", I.min()},
                        {"intensity_max", I.max()},
                        {"exposed_cells", om.count()},
                        {"exposed_area", om.area()},
                        {"exposed_perimeter", perimeter(om)},
                        {"components", count_components(om)},
                        {"kernel_scale", im->kernel_scale()},
                        {"domain_radius", im->domain_radius()}};
  RunOutcome r = std::move(out.outcome);
  out.manifest(r, results);
  r.summary = "forward: " + std::to_string(om.count()) + " exposed cells, max intensity " + num(I.max());
  return r;
}

RunOutcome run_invert(const RunConfig& cfg) {
  apply_threads(cfg);
  const GridSpec grid = cfg.grid.spec();
  const BinaryPattern target = load_pattern(cfg.input, grid);
  const auto im = make_imager(cfg);
  Problem pb(*im, target, cfg.objective);
  if (!cfg.reference.empty()) pb.reference = load_pattern(cfg.reference, grid).bitmap();
  const SweepTrace tr = gamma_sweep(pb);

  Outputs out(cfg, "invert");
  out.outcome.warnings = cfg.optics.warnings();
  out.input(cfg.input);
  out.input(cfg.reference);

  const BinaryPattern mask(tr.final_mask);
  const ScalarField I = im->intensity(tr.final_mask);
  const BinaryPattern om = exposed_set(I, cfg.optics.h);
  out.bitmap("mask.pgm", mask);
  out.pgm16("mask_field.pgm", tr.records.back().u);
  out.pgm16("intensity.pgm", I);
  out.bitmap("exposure.pgm", om);
  json cj = contour_json(om);
  cj["config_hash"] = out.hash();
  out.text("exposure_contour.json", cj.dump(2) + "\n");

  std::string sweep = "eps,eta,F_initial,F,d_eta,P_eps,l1_step,iterations,stalled\n";
  std::string iters = "stage,eps,iter,F,d_eta,P_eps,step,backtracks\n";
  for (std::size_t k = 0; k < tr.records.size(); ++k) {
    const SweepRecord& r = tr.records[k];
    sweep += num(r.eps) + "," + num(r.eta) + "," + num(r.F_initial) + "," + num(r.F) + "," + num(r.d) + "," + num(r.P) +
             "," + num(r.l1_step) + "," + std::to_string(r.iterations) + "," + (r.stalled ? "1" : "0") + "\n";
    for (const IterationLog& l : r.log)
      iters += std::to_string(k) + "," + num(r.eps) + "," + std::to_string(l.iter) + "," + num(l.F) + "," + num(l.d) +
               "," + num(l.P) + "," + num(l.step) + "," + std::to_string(l.backtracks) + "\n";
    for (std::size_t s = 0; s < r.snapshots.size(); ++s)
      out.pgm16("snapshots/stage" + std::to_string(k) + "_iter" +
                    std::to_string((s + 1) * static_cast<std::size_t>(cfg.objective.snapshot_every)) + ".pgm",
                r.snapshots[s]);
  }
  out.text("sweep.csv", sweep);
  out.text("iterations.csv", iters);
  out.text("report.csv", "which," + DistanceReport::csv_header() + "\nfinal," + tr.final_report.csv_row() +
                             "\nidentity," + tr.identity_report.csv_row() + "\n");

  RunOutcome r = std::move(out.outcome);
  if (tr.any_stall) {
    r.status = Status::stalled;
    r.warnings.push_back("line search stalled in at least one stage");
  }
  const json results = {{"stalled", tr.any_stall},
                        {"F_zero", tr.f_zero.to_string()},
                        {"final", report_json(tr.final_report)},
                        {"identity", report_json(tr.identity_report)},
                        {"eps_schedule", pb.obj.eps_schedule},
                        {"kappa", pb.kappa},
                        {"target_perimeter", pb.target_perimeter}};
  out.manifest(r, results);
  r.summary = "invert: d3 " + num(tr.final_report.d3) + " (identity mask " + num(tr.identity_report.d3) + ")" +
              (tr.any_stall ? ", stalled" : "");
  return r;
}

RunOutcome run_metrics(const RunConfig& cfg, std::string* csv) {
  apply_threads(cfg);
  const GridSpec grid = cfg.grid.spec();
  if (cfg.reference.empty()) throw ConfigError("metrics: two patterns are required");
  const BinaryPattern a = load_pattern(cfg.input, grid);
  const BinaryPattern b = load_pattern(cfg.reference, grid);
  const DistanceReport rep = strict_distance(a, b);
  const std::string text = DistanceReport::csv_header() + "\n" + rep.csv_row() + "\n";
  if (csv) *csv = text;

  Outputs out(cfg, "metrics");
  out.input(cfg.input);
  out.input(cfg.reference);
  out.text("report.csv", text);
  RunOutcome r = std::move(out.outcome);
  out.manifest(r, report_json(rep));
  r.summary = "metrics: d3 " + num(rep.d3);
  return r;
}

RunOutcome run_kernel_build(const RunConfig& cfg) {
  apply_threads(cfg);
  const fs::path dir = cache_dir(cfg);
  RunOutcome r;
  if (auto psf = read_kernel_cache(dir, cfg.optics.delta_tilde, cfg.optics.psf_budget)) {
    r.summary = "kernel-build: cache hit in " + dir.string() + " (deviation " + num(psf->deviation) + ")";
    return r;
  }
  SmoothedPsf psf;
  try {
    psf = build_smoothed_psf(cfg.optics.delta_tilde, smooth_cutoff, cfg.optics.psf_budget);
  } catch (const ConstructionFailed& e) {
    const json fail = {{"delta_tilde", cfg.optics.delta_tilde},
                       {"budget", {{"s0_halvings", cfg.optics.psf_budget.s0_halvings},
                                   {"b0_doublings", cfg.optics.psf_budget.b0_doublings}}},
                       {"best_deviation", e.best_deviation()},
                       {"message", e.what()}};
    write_file(dir / "kernel_failure.json", fail.dump(2) + "\n");
    throw;
  }
  write_kernel_cache(dir, psf, cfg.optics.psf_budget);
  r.files = {"kernel.json", "kernel_profile.csv"};
  r.summary = "kernel-build: s0 " + num(psf.s0) + ", b " + num(psf.b) + ", deviation " + num(psf.deviation);
  return r;
}

}  // namespace litho
