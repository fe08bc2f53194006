#pragma once

#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "imaging.hpp"

namespace litho {

// Process exit statuses shared by the C API and the command line.
enum class Status : int { ok = 0, internal = 1, validation = 2, io = 3, stalled = 4 };

struct RunOutcome {
  Status status = Status::ok;
  std::string summary;              // one line for humans
  std::vector<std::string> warnings;
  std::vector<std::string> files;   // written, relative to the output directory
};

// Imager for a run; the smoothed PSF comes from the kernel cache when one is
// configured and matches, and is stored there otherwise.
std::unique_ptr<Imager> make_imager(const RunConfig& cfg);

// Each run reads cfg.input (and cfg.reference where relevant) and writes into
// cfg.output, finishing with manifest.json. Errors are thrown (see errors.hpp).
RunOutcome run_forward(const RunConfig& cfg);
RunOutcome run_invert(const RunConfig& cfg);
// `csv` receives the header and the single report row.
RunOutcome run_metrics(const RunConfig& cfg, std::string* csv = nullptr);
// Writes the kernel cache into cfg.kernel_cache (default <output>/kernel);
// a matching cache is left untouched. ConstructionFailed propagates.
RunOutcome run_kernel_build(const RunConfig& cfg);

}  // namespace litho
