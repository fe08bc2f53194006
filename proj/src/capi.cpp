#include "lithoinv/lithoinv.h"

#include <cstring>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "runs.hpp"

struct litho_config {
  litho::RunConfig c;
};
struct litho_field {
  litho::ScalarField f;
};
struct litho_imager {
  std::unique_ptr<litho::Imager> im;
};

namespace {

thread_local std::string g_last_error;

int fail(litho_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
int guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const litho::ConstructionFailed& e) {
    return fail(LITHO_ERR_STALLED, std::string(e.what()) + " (best deviation " + std::to_string(e.best_deviation()) + ")");
  } catch (const litho::IoError& e) {
    return fail(LITHO_ERR_IO, e.what());
  } catch (const litho::Error& e) {
    return fail(LITHO_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LITHO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LITHO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LITHO_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define LITHO_REQUIRE(cond)                                                    \
  do {                                                                         \
    if (!(cond)) return fail(LITHO_ERR_VALIDATION, "null argument: " #cond);   \
  } while (0)

int finish_run(const litho::RunOutcome& r, char** summary) {
  std::string s = r.summary;
  for (const auto& w : r.warnings) s += "\nwarning: " + w;
  if (summary) *summary = dup(s);
  if (r.status != litho::Status::ok) g_last_error = r.summary;
  return static_cast<int>(r.status);
}

}  // namespace

extern "C" {

const char* litho_last_error(void) { return g_last_error.c_str(); }
const char* litho_version(void) { return "0.1.0"; }
void litho_string_free(char* s) { std::free(s); }

int litho_config_default(litho_config** out) {
  LITHO_REQUIRE(out);
  return guarded([&] {
    *out = new litho_config{};
    return LITHO_OK;
  });
}

int litho_config_from_json(const char* json, litho_config** out) {
  LITHO_REQUIRE(json && out);
  return guarded([&] {
    *out = new litho_config{litho::parse_run_config_text(json)};
    return LITHO_OK;
  });
}

int litho_config_from_file(const char* path, litho_config** out) {
  LITHO_REQUIRE(path && out);
  return guarded([&] {
    *out = new litho_config{litho::parse_run_config_text(litho::read_file(path))};
    return LITHO_OK;
  });
}

int litho_config_to_json(const litho_config* cfg, char** out) {
  LITHO_REQUIRE(cfg && out);
  return guarded([&] {
    *out = dup(litho::to_json(cfg->c).dump(2));
    return LITHO_OK;
  });
}

int litho_config_hash(const litho_config* cfg, char out[41]) {
  LITHO_REQUIRE(cfg && out);
  return guarded([&] {
    const std::string h = litho::config_hash(cfg->c);
    std::memcpy(out, h.c_str(), 41);
    return LITHO_OK;
  });
}

int litho_config_set_paths(litho_config* cfg, const char* input, const char* reference, const char* output) {
  LITHO_REQUIRE(cfg);
  if (input) cfg->c.input = input;
  if (reference) cfg->c.reference = reference;
  if (output) cfg->c.output = output;
  return LITHO_OK;
}

int litho_config_set_seed(litho_config* cfg, uint64_t seed) {
  LITHO_REQUIRE(cfg);
  cfg->c.seed = seed;
  return LITHO_OK;
}

int litho_config_set_threads(litho_config* cfg, int threads) {
  LITHO_REQUIRE(cfg);
  if (threads < 0) return fail(LITHO_ERR_VALIDATION, "threads must be nonnegative");
  cfg->c.threads = threads;
  return LITHO_OK;
}

int litho_config_set_delta_tilde(litho_config* cfg, double delta_tilde) {
  LITHO_REQUIRE(cfg);
  if (!(delta_tilde > 0.0)) return fail(LITHO_ERR_VALIDATION, "delta_tilde must be positive");
  cfg->c.optics.delta_tilde = delta_tilde;
  return LITHO_OK;
}

void litho_config_free(litho_config* cfg) { delete cfg; }

int litho_field_new(int nx, int ny, double spacing, double origin_x, double origin_y, litho_field** out) {
  LITHO_REQUIRE(out);
  if (nx < 1 || ny < 1 || !(spacing > 0.0)) return fail(LITHO_ERR_VALIDATION, "field: bad shape or spacing");
  return guarded([&] {
    *out = new litho_field{litho::ScalarField(litho::GridSpec{nx, ny, spacing, origin_x, origin_y})};
    return LITHO_OK;
  });
}

int litho_field_load_mask(const litho_config* cfg, const char* path, litho_field** out) {
  LITHO_REQUIRE(cfg && path && out);
  return guarded([&] {
    *out = new litho_field{litho::read_mask(path, cfg->c.grid.spec())};
    return LITHO_OK;
  });
}

int litho_field_shape(const litho_field* f, int* nx, int* ny, double* spacing) {
  LITHO_REQUIRE(f);
  if (nx) *nx = f->f.nx();
  if (ny) *ny = f->f.ny();
  if (spacing) *spacing = f->f.grid().spacing;
  return LITHO_OK;
}

double* litho_field_data(litho_field* f) { return f ? f->f.values().data() : nullptr; }
void litho_field_free(litho_field* f) { delete f; }

int litho_imager_new(const litho_config* cfg, litho_imager** out) {
  LITHO_REQUIRE(cfg && out);
  return guarded([&] {
    *out = new litho_imager{litho::make_imager(cfg->c)};
    return LITHO_OK;
  });
}

int litho_imager_intensity(const litho_imager* im, const litho_field* mask, litho_field** out) {
  LITHO_REQUIRE(im && mask && out);
  return guarded([&] {
    litho::require_same_grid(mask->f.grid(), im->im->grid(), "mask");
    *out = new litho_field{im->im->intensity(mask->f)};
    return LITHO_OK;
  });
}

double litho_imager_kernel_scale(const litho_imager* im) { return im ? im->im->kernel_scale() : 0.0; }
void litho_imager_free(litho_imager* im) { delete im; }

int litho_distance(const litho_field* a, const litho_field* b, litho_report* out) {
  LITHO_REQUIRE(a && b && out);
  return guarded([&] {
    const auto r = litho::strict_distance(litho::BinaryPattern::threshold(a->f, 0.5), litho::BinaryPattern::threshold(b->f, 0.5));
    *out = litho_report{};
    out->d1_infinite = r.d1.is_infinite();
    out->d1 = r.d1.is_finite() ? r.d1.value() : 0.0;
    out->d1_tilde_infinite = r.d1_tilde.is_infinite();
    out->d1_tilde = r.d1_tilde.is_finite() ? r.d1_tilde.value() : 0.0;
    out->d2 = r.d2;
    out->d3 = r.d3;
    out->perimeter_a = r.perimeter_a;
    out->perimeter_b = r.perimeter_b;
    return LITHO_OK;
  });
}

int litho_run_forward(const litho_config* cfg, char** summary) {
  LITHO_REQUIRE(cfg);
  return guarded([&] { return finish_run(litho::run_forward(cfg->c), summary); });
}

int litho_run_invert(const litho_config* cfg, char** summary) {
  LITHO_REQUIRE(cfg);
  return guarded([&] { return finish_run(litho::run_invert(cfg->c), summary); });
}

int litho_run_metrics(const litho_config* cfg, char** csv) {
  LITHO_REQUIRE(cfg);
  return guarded([&] {
    std::string text;
    const litho::RunOutcome r = litho::run_metrics(cfg->c, &text);
    if (csv) *csv = dup(text);
    return static_cast<int>(r.status);
  });
}

int litho_run_kernel_build(const litho_config* cfg, char** summary) {
  LITHO_REQUIRE(cfg);
  return guarded([&] { return finish_run(litho::run_kernel_build(cfg->c), summary); });
}

}  // extern "C"
