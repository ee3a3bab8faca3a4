#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>

namespace entmom {

/// Neumaier's variant of Kahan summation. Also tracks the largest partial
/// sum seen so callers can measure cancellation.
template <std::floating_point Real>
class CompensatedSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    max_partial_ = std::max(max_partial_, std::abs(sum_ + comp_));
  }

  CompensatedSum& operator+=(Real x) {
    add(x);
    return *this;
  }

  Real value() const { return sum_ + comp_; }
  Real max_abs_partial() const { return max_partial_; }

  /// log10(max |partial sum| / |result|); +inf when the result is zero
  /// but some partial sum was not.
  Real cancellation_log10() const {
    const Real v = std::abs(value());
    if (max_partial_ == Real(0)) return Real(0);
    if (v == Real(0)) return std::numeric_limits<Real>::infinity();
    return std::max(Real(0), std::log10(max_partial_ / v));
  }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
  Real max_partial_ = 0;
};

}  // namespace entmom
