#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "field.hpp"
#include "imaging.hpp"
#include "optimize.hpp"

namespace litho {

struct GridConfig {
  int n = 128;               // samples per side
  double half_width = 1.0;   // window [-half_width, half_width]^2

  GridSpec spec() const { return GridSpec::centered(n, half_width); }
};

struct RunConfig {
  OpticsConfig optics;
  ObjectiveConfig objective;
  GridConfig grid;
  std::string input;         // mask / target / first pattern
  std::string reference;     // second pattern for metrics, gamma reference for invert
  std::string output = "out";
  std::string kernel_cache;  // directory; empty disables the cache
  std::uint64_t seed = 0;
  int threads = 0;           // 0 = hardware default

  // Every violated invariant, across all sections.
  std::vector<std::string> validate() const;
};

// Unknown keys, type errors and invariant violations are collected into a
// single ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_run_config_text(const std::string& text);

// Canonical echo of every field (defaults included).
nlohmann::json to_json(const RunConfig& c);
// git-style hash of the canonical echo, excluding paths and threads.
std::string config_hash(const RunConfig& c);

}  // namespace litho
