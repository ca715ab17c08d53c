// Constraining intervals with natural-number endpoints (upper endpoint may
// be infinite).  Lower/upper-bound classification drives which component
// construction applies; general intervals are legal in the AST and the
// oracle but are rejected by the compiler.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "tlkit/rational.hpp"

namespace tlkit {

constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

enum class IntervalClass { LowerBound, UpperBound, General };

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = kInfinity;  // kInfinity encodes ∞
  bool lo_strict = false;
  bool hi_strict = false;

  static Interval all() { return Interval{}; }
  static Interval upper(std::int64_t c, bool strict) {
    return Interval{0, c, false, strict};
  }
  static Interval lower(std::int64_t c, bool strict) {
    return Interval{c, kInfinity, strict, false};
  }
  static Interval make(std::int64_t lo, bool lo_strict, std::int64_t hi,
                       bool hi_strict) {
    Interval iv{lo, hi, lo_strict, hi_strict};
    iv.check();
    return iv;
  }

  void check() const {
    if (lo < 0 || hi < 0) throw std::invalid_argument("interval: negative endpoint");
    if (hi == kInfinity && hi_strict)
      throw std::invalid_argument("interval: strict infinite bound");
    if (hi != kInfinity && lo > hi)
      throw std::invalid_argument("interval: lo > hi");
    // Singular [c,c] intervals are excluded by the logic.
    if (lo == hi && !lo_strict && !hi_strict)
      throw std::invalid_argument("interval: singular interval");
  }

  bool unbounded() const { return hi == kInfinity; }

  IntervalClass classify() const {
    if (lo == 0 && !lo_strict) return IntervalClass::UpperBound;
    if (unbounded()) return IntervalClass::LowerBound;
    return IntervalClass::General;
  }
  bool one_sided() const { return classify() != IntervalClass::General; }

  bool is_all() const { return lo == 0 && !lo_strict && unbounded(); }

  // Empty intervals such as [0,0) can arise from strict bounds.
  bool empty() const {
    if (unbounded()) return false;
    if (lo < hi) return false;
    return lo_strict || hi_strict;  // lo == hi with a strict end
  }

  bool contains(const Rational& v) const {
    if (lo_strict ? !(v > Rational(lo)) : !(v >= Rational(lo))) return false;
    if (unbounded()) return true;
    return hi_strict ? v < Rational(hi) : v <= Rational(hi);
  }
  bool contains_zero() const { return contains(Rational(0)); }

  // True once v lies above the interval; membership can never hold again
  // for larger values.
  bool above(const Rational& v) const {
    if (unbounded()) return false;
    return hi_strict ? v >= Rational(hi) : v > Rational(hi);
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_strict == b.lo_strict &&
           a.hi_strict == b.hi_strict;
  }

  std::string str() const {
    if (is_all()) return "[0,inf)";
    std::string s;
    s += lo_strict ? '(' : '[';
    s += std::to_string(lo);
    s += ',';
    s += unbounded() ? "inf" : std::to_string(hi);
    s += (unbounded() || hi_strict) ? ')' : ']';
    return s;
  }
};

}  // namespace tlkit
