#pragma once

#include <cmath>
#include <limits>

#include "lot/errors.hpp"

namespace lot {

/// Extended-real time separation value.
///
/// A TimeValue is either a finite nonnegative proper time or the sentinel
/// NEG_INFINITY marking a causally unrelated pair. Arithmetic follows the
/// absorption conventions: (-inf) + a = -inf for every a, and
/// (-inf)^p = -inf for every p > 0.
class TimeValue {
 public:
  /// Default-constructed values are unrelated (-inf).
  constexpr TimeValue() = default;

  static constexpr TimeValue unrelated() { return TimeValue{}; }

  /// A finite value; must be >= 0.
  static TimeValue finite(double v) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error("TimeValue::finite: value must be finite and >= 0");
    return TimeValue{v};
  }

  /// Accepts either a finite nonnegative value or -inf.
  static TimeValue from_raw(double v) {
    if (v == -kInf) return unrelated();
    return finite(v);
  }

  constexpr double value() const { return v_; }

  /// ell >= 0: the pair is causally related.
  constexpr bool related() const { return v_ != -kInf; }

  /// ell > 0: the pair is chronologically related.
  constexpr bool chronological() const { return v_ > 0.0; }

  friend constexpr TimeValue operator+(TimeValue a, TimeValue b) {
    // IEEE -inf absorbs under addition, matching the convention.
    return TimeValue{a.v_ + b.v_};
  }

  /// x^p with (-inf)^p = -inf, for p > 0.
  TimeValue pow(double p) const {
    if (!related()) return unrelated();
    return TimeValue{std::pow(v_, p)};
  }

  friend constexpr bool operator==(TimeValue a, TimeValue b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(TimeValue a, TimeValue b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(TimeValue a, TimeValue b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>(TimeValue a, TimeValue b) { return a.v_ > b.v_; }
  friend constexpr bool operator>=(TimeValue a, TimeValue b) { return a.v_ >= b.v_; }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  constexpr explicit TimeValue(double v) : v_(v) {}

  double v_ = -kInf;
};

}  // namespace lot
