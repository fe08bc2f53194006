#include "config.hpp"

#include <sstream>

#include "errors.hpp"
#include "io.hpp"

namespace litho {

using nlohmann::json;

namespace {

template <class E>
struct EnumName {
  E value;
  const char* name;
};

constexpr EnumName<PsfModel> kPsf[] = {{PsfModel::smoothed, "smoothed"}, {PsfModel::jinc, "jinc"}, {PsfModel::gaussian, "gaussian"}};
constexpr EnumName<Coherence> kCoherence[] = {{Coherence::full, "full"}, {Coherence::partial, "partial"}};
constexpr EnumName<SupportRegion> kSupport[] = {{SupportRegion::disk, "disk"}, {SupportRegion::window, "window"}};

template <class E, std::size_t N>
const char* name_of(const EnumName<E> (&table)[N], E v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

// Reads one section, recording problems instead of throwing.
class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<std::string>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(where("") + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    const json& v = j_[key];
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("");
        if constexpr (std::is_integral_v<T>)
          if (!v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      errors_.push_back(where(key) + " has the wrong type");
    }
  }

  template <class E, std::size_t N>
  void get_enum(const char* key, E& out, const EnumName<E> (&table)[N]) {
    std::string s;
    get(key, s);
    if (s.empty()) return;
    for (const auto& e : table)
      if (s == e.name) {
        out = e.value;
        return;
      }
    errors_.push_back(where(key) + ": unknown value \"" + s + "\"");
  }

  const json* section(const char* key) {
    seen_.push_back(key);
    return j_.is_object() && j_.contains(key) ? &j_[key] : nullptr;
  }

  void finish() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) errors_.push_back(where(it.key()) + ": unknown key");
  }

 private:
  std::string where(const std::string& key) const {
    if (prefix_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

  const json& j_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::vector<std::string> seen_;
};

}  // namespace

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> e = optics.validate();
  for (auto& m : objective.validate()) e.push_back(std::move(m));
  if (grid.n < 8) e.push_back("grid.n must be at least 8");
  if (!(grid.half_width > 0.0)) e.push_back("grid.half_width must be positive");
  if (threads < 0) e.push_back("threads must be nonnegative");
  return e;
}

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  std::vector<std::string> errors;
  Reader top(j, "", errors);
  if (const json* g = top.section("grid")) {
    Reader r(*g, "grid", errors);
    r.get("n", c.grid.n);
    r.get("half_width", c.grid.half_width);
    r.finish();
  }
  if (const json* o = top.section("optics")) {
    Reader r(*o, "optics", errors);
    r.get("k", c.optics.k);
    r.get("na", c.optics.na);
    r.get("sigma", c.optics.sigma);
    r.get("h", c.optics.h);
    r.get("eta", c.optics.eta);
    r.get_enum("psf", c.optics.psf, kPsf);
    r.get_enum("coherence", c.optics.coherence, kCoherence);
    r.get_enum("support", c.optics.support, kSupport);
    r.get("delta_tilde", c.optics.delta_tilde);
    if (const json* b = r.section("psf_budget")) {
      Reader rb(*b, "optics.psf_budget", errors);
      rb.get("s0_halvings", c.optics.psf_budget.s0_halvings);
      rb.get("b0_doublings", c.optics.psf_budget.b0_doublings);
      rb.finish();
    }
    r.get("gaussian_s0", c.optics.gaussian_s0);
    r.get("allow_large_dense", c.optics.allow_large_dense);
    r.get("dense_limit", c.optics.dense_limit);
    r.finish();
  }
  if (const json* o = top.section("objective")) {
    Reader r(*o, "objective", errors);
    ObjectiveConfig& b = c.objective;
    r.get("b", b.b);
    r.get("eps_schedule", b.eps_schedule);
    r.get("eta0", b.eta0);
    r.get("kappa", b.kappa);
    r.get("p", b.p);
    r.get("iota", b.iota);
    r.get("step0", b.step0);
    r.get("step_max", b.step_max);
    r.get("backtrack", b.backtrack);
    r.get("armijo", b.armijo);
    r.get("max_backtracks", b.max_backtracks);
    r.get("max_iterations", b.max_iterations);
    r.get("tol", b.tol);
    r.get("gamma", b.gamma);
    r.get("snapshot_every", b.snapshot_every);
    r.finish();
  }
  if (const json* p = top.section("paths")) {
    Reader r(*p, "paths", errors);
    r.get("input", c.input);
    r.get("reference", c.reference);
    r.get("output", c.output);
    r.get("kernel_cache", c.kernel_cache);
    r.finish();
  }
  top.get("seed", c.seed);
  top.get("threads", c.threads);
  top.finish();
  for (auto& m : c.validate()) errors.push_back(std::move(m));
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid configuration (" << errors.size() << " problem" << (errors.size() > 1 ? "s" : "") << "):";
    for (const auto& m : errors) os << "\n  " << m;
    throw ConfigError(os.str());
  }
  return c;
}

RunConfig parse_run_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig& c) {
  const OpticsConfig& o = c.optics;
  const ObjectiveConfig& b = c.objective;
  return {
      {"grid", {{"n", c.grid.n}, {"half_width", c.grid.half_width}}},
      {"optics",
       {{"k", o.k},
        {"na", o.na},
        {"sigma", o.sigma},
        {"h", o.h},
        {"eta", o.eta},
        {"psf", name_of(kPsf, o.psf)},
        {"coherence", name_of(kCoherence, o.coherence)},
        {"support", name_of(kSupport, o.support)},
        {"delta_tilde", o.delta_tilde},
        {"psf_budget", {{"s0_halvings", o.psf_budget.s0_halvings}, {"b0_doublings", o.psf_budget.b0_doublings}}},
        {"gaussian_s0", o.gaussian_s0},
        {"allow_large_dense", o.allow_large_dense},
        {"dense_limit", o.dense_limit}}},
      {"objective",
       {{"b", b.b},
        {"eps_schedule", b.eps_schedule},
        {"eta0", b.eta0},
        {"kappa", b.kappa},
        {"p", b.p},
        {"iota", b.iota},
        {"step0", b.step0},
        {"step_max", b.step_max},
        {"backtrack", b.backtrack},
        {"armijo", b.armijo},
        {"max_backtracks", b.max_backtracks},
        {"max_iterations", b.max_iterations},
        {"tol", b.tol},
        {"gamma", b.gamma},
        {"snapshot_every", b.snapshot_every}}},
      {"paths", {{"input", c.input}, {"reference", c.reference}, {"output", c.output}, {"kernel_cache", c.kernel_cache}}},
      {"seed", c.seed},
      {"threads", c.threads},
  };
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j.erase("paths");
  j.erase("threads");
  return git_blob_hash(j.dump());
}

}  // namespace litho
