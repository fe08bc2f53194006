#pragma once

#include <string>

namespace litho {

// Nonnegative-or-any real extended by a single +infinity element. Used where a
// functional is "+inf otherwise"; serialized as the string "inf" rather than a
// floating-point infinity.
class ExtReal {
 public:
  ExtReal() = default;
  ExtReal(double v) : v_(v) {}  // NOLINT: implicit by design
  static ExtReal infinity() {
    ExtReal r;
    r.inf_ = true;
    return r;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  // Throws DomainError for the infinite element.
  double value() const;

  std::string to_string() const;
  static ExtReal parse(const std::string& s);

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.inf_ || b.inf_) return infinity();
    return ExtReal(a.v_ + b.v_);
  }
  // Scaling by a nonnegative factor; 0 * inf stays inf (the sentinel dominates).
  friend ExtReal operator*(double a, ExtReal b) { return b.inf_ ? infinity() : ExtReal(a * b.v_); }
  friend bool operator==(ExtReal a, ExtReal b) { return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_); }
  friend bool operator<(ExtReal a, ExtReal b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(ExtReal a, ExtReal b) { return a < b || a == b; }
  friend bool operator>(ExtReal a, ExtReal b) { return b < a; }
  friend bool operator>=(ExtReal a, ExtReal b) { return b <= a; }

 private:
  double v_ = 0.0;
  bool inf_ = false;
};

}  // namespace litho
