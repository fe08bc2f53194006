// lithoinv: forward imaging, mask inversion, pattern metrics and PSF caching.

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "lithoinv/lithoinv.h"

namespace {

struct ConfigDeleter {
  void operator()(litho_config* c) const { litho_config_free(c); }
};
using ConfigPtr = std::unique_ptr<litho_config, ConfigDeleter>;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory (overrides paths.output)");
  app->add_option("--seed", c.seed, "seed recorded in the manifest");
  app->add_option("--threads", c.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

int report(int status) {
  if (status != LITHO_OK) std::fprintf(stderr, "lithoinv: %s\n", litho_last_error());
  return status;
}

// Loads the configuration and applies command-line overrides.
int load(const Common& c, const char* input, const char* reference, ConfigPtr& cfg) {
  litho_config* raw = nullptr;
  const int st = c.config.empty() ? litho_config_default(&raw) : litho_config_from_file(c.config.c_str(), &raw);
  if (st != LITHO_OK) return st;
  cfg.reset(raw);
  if (int s = litho_config_set_paths(raw, input, reference, c.out.empty() ? nullptr : c.out.c_str())) return s;
  if (c.seed)
    if (int s = litho_config_set_seed(raw, *c.seed)) return s;
  if (c.threads)
    if (int s = litho_config_set_threads(raw, *c.threads)) return s;
  return LITHO_OK;
}

// Prints and releases `text` after the run that filled it has returned.
int print_and_free(int status, char* text) {
  if (text) {
    const std::string t = text;
    std::printf("%s%s", t.c_str(), !t.empty() && t.back() == '\n' ? "" : "\n");
    litho_string_free(text);
  }
  return report(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse lithography: forward imaging, phase-field mask inversion, pattern metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(litho_version()));

  Common c;
  std::string mask, target, reference, a, b;
  std::optional<double> delta_tilde;

  auto* fwd = app.add_subcommand("forward", "image a mask and threshold the intensity");
  fwd->add_option("mask", mask, "mask (.pgm, .png or polygon .json)")->required();
  add_common(fwd, c);

  auto* inv = app.add_subcommand("invert", "recover a mask whose exposure matches a target");
  inv->add_option("target", target, "target pattern (.pgm, .png or polygon .json)")->required();
  inv->add_option("--reference", reference, "reference pattern for the neighbourhood constraint");
  add_common(inv, c);

  auto* met = app.add_subcommand("metrics", "distances between two patterns, as one CSV row");
  met->add_option("a", a, "first pattern")->required();
  met->add_option("b", b, "second pattern")->required();
  add_common(met, c);

  auto* kb = app.add_subcommand("kernel-build", "build and cache the smoothed point spread function");
  kb->add_option("--delta-tilde", delta_tilde, "target W^{1,1} deviation from the Gaussian")->check(CLI::PositiveNumber);
  add_common(kb, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : LITHO_ERR_VALIDATION;
  }

  ConfigPtr cfg;
  char* text = nullptr;
  if (fwd->parsed()) {
    if (int s = load(c, mask.c_str(), nullptr, cfg)) return report(s);
    const int st = litho_run_forward(cfg.get(), &text);
    return print_and_free(st, text);
  }
  if (inv->parsed()) {
    if (int s = load(c, target.c_str(), reference.empty() ? nullptr : reference.c_str(), cfg)) return report(s);
    const int st = litho_run_invert(cfg.get(), &text);
    return print_and_free(st, text);
  }
  if (met->parsed()) {
    if (int s = load(c, a.c_str(), b.c_str(), cfg)) return report(s);
    const int st = litho_run_metrics(cfg.get(), &text);
    return print_and_free(st, text);
  }
  if (int s = load(c, nullptr, nullptr, cfg)) return report(s);
  if (delta_tilde)
    if (int s = litho_config_set_delta_tilde(cfg.get(), *delta_tilde)) return report(s);
  const int st = litho_run_kernel_build(cfg.get(), &text);
  return print_and_free(st, text);
}
