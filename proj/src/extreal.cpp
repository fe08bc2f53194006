#include "extreal.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace litho {

double ExtReal::value() const {
  if (inf_) throw DomainError("value of the +inf sentinel requested");
  return v_;
}

std::string ExtReal::to_string() const {
  if (inf_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v_);
  return buf;
}

ExtReal ExtReal::parse(const std::string& s) {
  if (s == "inf") return infinity();
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("not an extended real: '" + s + "'");
  return ExtReal(v);
}

}  // namespace litho
