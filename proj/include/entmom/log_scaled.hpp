#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <ostream>
#include <span>

#include "entmom/compensated_sum.hpp"

namespace entmom {

/// Sign and natural-log magnitude of a real number. Used for gamma-scale
/// quantities such as Γ(n+q)/(n-1)! that leave the range of native floats.
///
/// sign == 0 is exactly zero; log_mag is then ignored.
template <std::floating_point Real>
struct LogScaled {
  int sign = 0;
  Real log_mag = 0;

  static LogScaled zero() { return {}; }

  static LogScaled from_log(int sign, Real log_mag) {
    if (sign == 0) return zero();
    return {sign > 0 ? 1 : -1, log_mag};
  }

  static LogScaled from_value(Real v) {
    if (v == Real(0)) return zero();
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
  }

  template <std::floating_point Other>
  static LogScaled convert(const LogScaled<Other>& other) {
    return from_log(other.sign, static_cast<Real>(other.log_mag));
  }

  bool is_zero() const { return sign == 0; }

  /// Native value; overflows to ±inf or underflows to 0 when out of range.
  Real value() const {
    if (sign == 0) return Real(0);
    return static_cast<Real>(sign) * std::exp(log_mag);
  }

  LogScaled operator-() const { return {-sign, log_mag}; }

  friend LogScaled operator*(const LogScaled& a, const LogScaled& b) {
    if (a.sign == 0 || b.sign == 0) return zero();
    return {a.sign * b.sign, a.log_mag + b.log_mag};
  }

  friend LogScaled operator/(const LogScaled& a, const LogScaled& b) {
    if (b.sign == 0) {
      return {a.sign == 0 ? 1 : a.sign, std::numeric_limits<Real>::infinity()};
    }
    if (a.sign == 0) return zero();
    return {a.sign * b.sign, a.log_mag - b.log_mag};
  }

  friend LogScaled operator+(const LogScaled& a, const LogScaled& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const LogScaled& big = a.log_mag >= b.log_mag ? a : b;
    const LogScaled& small = a.log_mag >= b.log_mag ? b : a;
    const Real ratio = std::exp(small.log_mag - big.log_mag);
    if (big.sign == small.sign) {
      return {big.sign, big.log_mag + std::log1p(ratio)};
    }
    if (ratio == Real(1)) return zero();
    return {big.sign, big.log_mag + std::log1p(-ratio)};
  }

  friend LogScaled operator-(const LogScaled& a, const LogScaled& b) { return a + (-b); }

  LogScaled& operator*=(const LogScaled& o) { return *this = *this * o; }
  LogScaled& operator/=(const LogScaled& o) { return *this = *this / o; }
  LogScaled& operator+=(const LogScaled& o) { return *this = *this + o; }

  LogScaled pow(Real p) const {
    if (sign == 0) return zero();
    return {sign > 0 ? 1 : (std::fmod(p, Real(2)) == Real(0) ? 1 : -1), log_mag * p};
  }

  LogScaled sqrt() const {
    if (sign == 0) return zero();
    return {1, log_mag / 2};
  }

  friend std::ostream& operator<<(std::ostream& os, const LogScaled& v) {
    return os << (v.sign < 0 ? "-" : "") << "exp(" << v.log_mag << ")";
  }
};

/// Sum of log-scaled terms: every term is rescaled by the largest magnitude
/// and accumulated with compensated summation.
template <std::floating_point Real>
struct LogScaledSum {
  LogScaled<Real> value;
  Real cancellation_log10 = 0;
};

template <std::floating_point Real>
LogScaledSum<Real> sum_log_scaled(std::span<const LogScaled<Real>> terms) {
  Real scale = -std::numeric_limits<Real>::infinity();
  for (const auto& t : terms) {
    if (t.sign != 0) scale = std::max(scale, t.log_mag);
  }
  if (!std::isfinite(scale)) return {LogScaled<Real>::zero(), Real(0)};
  CompensatedSum<Real> acc;
  for (const auto& t : terms) {
    if (t.sign != 0) acc.add(static_cast<Real>(t.sign) * std::exp(t.log_mag - scale));
  }
  auto rescaled = LogScaled<Real>::from_value(acc.value());
  if (rescaled.sign != 0) rescaled.log_mag += scale;
  return {rescaled, acc.cancellation_log10()};
}

}  // namespace entmom
