#pragma once

// Gamma-family primitives and terminating hypergeometric sums.
//
// ln Γ, ψ₀, ψ₁ and Γ-ratios are delegated to Boost.Math; everything that has
// to produce structural zeros (reciprocal gamma at poles, Pochhammer
// products, generalized binomials) is computed here by running products.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "entmom/compensated_sum.hpp"
#include "entmom/errors.hpp"
#include "entmom/log_scaled.hpp"

namespace entmom {

/// Exact rational in lowest terms with a positive denominator.
using RationalScalar = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Always "p/q", including integers ("4/1") and zero ("0/1").
inline std::string to_string(const RationalScalar& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

template <std::floating_point Real>
Real to_real(const RationalScalar& r) {
  return r.template convert_to<Real>();
}

namespace detail {

using math_policy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::denorm_error<boost::math::policies::ignore_error>>;

}  // namespace detail

/// Absolute tolerance used to decide that a real argument sits on an integer.
inline constexpr double integer_tolerance = 1e-12;

template <std::floating_point Real>
bool is_integer(Real x) {
  return std::abs(x - std::round(x)) <= Real(integer_tolerance);
}

template <std::floating_point Real>
bool is_nonpositive_integer(Real x) {
  return x <= Real(integer_tolerance) && is_integer(x);
}

template <std::floating_point Real>
Real ln_gamma(Real x) {
  if (!(x > 0)) throw domain_error("ln_gamma requires x > 0");
  return boost::math::lgamma(x, detail::math_policy{});
}

/// Signed log of |Γ(x)| for any x that is not a pole.
template <std::floating_point Real>
LogScaled<Real> gamma_scaled(Real x) {
  if (is_nonpositive_integer(x)) throw domain_error("gamma_scaled: pole at non-positive integer");
  int sign = 1;
  const Real lg = boost::math::lgamma(x, &sign, detail::math_policy{});
  return LogScaled<Real>::from_log(sign, lg);
}

/// 1/Γ(x) in log-scaled form; exactly zero at the poles of Γ.
template <std::floating_point Real>
LogScaled<Real> rgamma_scaled(Real x) {
  if (is_nonpositive_integer(x)) return LogScaled<Real>::zero();
  const auto g = gamma_scaled(x);
  return {g.sign, -g.log_mag};
}

/// Reciprocal gamma. Total: zero at non-positive integers, reflection
/// (inside Boost) for other negative arguments, underflows to 0 for large x.
template <std::floating_point Real>
Real rgamma(Real x) {
  if (is_nonpositive_integer(x)) return Real(0);
  if (x > Real(150)) return std::exp(-ln_gamma(x));
  return Real(1) / boost::math::tgamma(x, detail::math_policy{});
}

/// log(Γ(a) / Γ(a + delta)) for a > 0, a + delta > 0, accurate when delta is
/// small against a.
template <std::floating_point Real>
Real ln_gamma_delta_ratio(Real a, Real delta) {
  if (!(a > 0) || !(a + delta > 0)) throw domain_error("ln_gamma_delta_ratio requires a > 0 and a + delta > 0");
  if (delta == Real(0)) return Real(0);
  const Real r = boost::math::tgamma_delta_ratio(a, delta, detail::math_policy{});
  if (std::isfinite(r) && r > std::numeric_limits<Real>::min()) return std::log(r);
  return ln_gamma(a) - ln_gamma(a + delta);
}

template <std::floating_point Real>
Real digamma(Real x) {
  if (!(x > 0)) throw domain_error("digamma requires x > 0");
  return boost::math::digamma(x, detail::math_policy{});
}

template <std::floating_point Real>
Real trigamma(Real x) {
  if (!(x > 0)) throw domain_error("trigamma requires x > 0");
  return boost::math::trigamma(x, detail::math_policy{});
}

/// Rising factorial a(a+1)…(a+k-1) by running product.
template <std::floating_point Real>
Real pochhammer(Real a, std::int64_t k) {
  Real p = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    const Real f = a + static_cast<Real>(i);
    if (f == Real(0)) return Real(0);
    p *= f;
  }
  return p;
}

inline RationalScalar pochhammer(const RationalScalar& a, std::int64_t k) {
  RationalScalar p = 1;
  for (std::int64_t i = 0; i < k; ++i) p *= a + i;
  return p;
}

/// a(a-1)…(a-k+1)/k! with real top argument. Multiplying before dividing
/// keeps every partial product an exact integer when a is one.
template <std::floating_point Real>
Real gen_binomial(Real a, std::int64_t k) {
  if (k < 0) return Real(0);
  Real p = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    const Real f = a - static_cast<Real>(i);
    if (f == Real(0)) return Real(0);
    p = p * f / static_cast<Real>(i + 1);
  }
  return p;
}

inline RationalScalar gen_binomial(const RationalScalar& a, std::int64_t k) {
  if (k < 0) return 0;
  RationalScalar p = 1;
  for (std::int64_t i = 0; i < k; ++i) p *= (a - i) / RationalScalar(i + 1);
  return p;
}

inline BigInt factorial(std::int64_t n) {
  BigInt f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

template <std::floating_point Real>
struct Hyp3F2Params {
  Real a1, a2, a3, b1, b2;
};

template <std::floating_point Real>
struct Hyp3F2Result {
  Real value;
  /// log10(max |partial sum| / |value|).
  Real cancellation_log10;
};

/// Σ_{k=0}^{N} (a1)ₖ(a2)ₖ(a3)ₖ / ((b1)ₖ(b2)ₖ k!) at unit argument, where
/// a1 = -N is a non-positive integer. Terms follow from the term ratio and are
/// accumulated with compensated summation.
template <std::floating_point Real>
Hyp3F2Result<Real> hyp3f2_terminating(const Hyp3F2Params<Real>& p) {
  if (!is_nonpositive_integer(p.a1)) {
    throw domain_error("hyp3f2_terminating requires a1 to be a non-positive integer");
  }
  const auto n_terms = static_cast<std::int64_t>(std::llround(-p.a1));
  const Real a1 = -static_cast<Real>(n_terms);
  CompensatedSum<Real> acc;
  Real term = 1;
  acc.add(term);
  for (std::int64_t k = 0; k < n_terms; ++k) {
    const Real kk = static_cast<Real>(k);
    const Real den = (p.b1 + kk) * (p.b2 + kk);
    if (std::abs(p.b1 + kk) <= Real(integer_tolerance) || std::abs(p.b2 + kk) <= Real(integer_tolerance)) {
      throw numerical_error("hyp3f2_terminating: denominator Pochhammer vanishes at k = " +
                            std::to_string(k + 1));
    }
    term *= (a1 + kk) * (p.a2 + kk) * (p.a3 + kk) / (den * (kk + 1));
    acc.add(term);
  }
  return {acc.value(), acc.cancellation_log10()};
}

struct Hyp3F2RationalParams {
  std::int64_t a1;
  RationalScalar a2, a3, b1, b2;
};

/// Exact counterpart of hyp3f2_terminating for rational parameters.
inline RationalScalar hyp3f2_terminating_rational(const Hyp3F2RationalParams& p) {
  if (p.a1 > 0) throw domain_error("hyp3f2_terminating_rational requires a1 <= 0");
  const std::int64_t n_terms = -p.a1;
  RationalScalar sum = 1;
  RationalScalar term = 1;
  for (std::int64_t k = 0; k < n_terms; ++k) {
    const RationalScalar d1 = p.b1 + k;
    const RationalScalar d2 = p.b2 + k;
    if (d1 == 0 || d2 == 0) {
      throw numerical_error("hyp3f2_terminating_rational: denominator Pochhammer vanishes at k = " +
                            std::to_string(k + 1));
    }
    term *= RationalScalar(p.a1 + k) * (p.a2 + k) * (p.a3 + k) / (d1 * d2 * RationalScalar(k + 1));
    sum += term;
  }
  return sum;
}

/// Exact binary value of a floating-point number.
template <std::floating_point Real>
RationalScalar exact_rational(Real x) {
  if (!std::isfinite(x)) throw domain_error("exact_rational: non-finite value");
  return RationalScalar(static_cast<double>(x)) +
         RationalScalar(static_cast<long double>(x) - static_cast<long double>(static_cast<double>(x)));
}

/// Cancellation level above which the floating-point sum is distrusted.
inline constexpr double cancellation_warning_log10 = 10.0;

/// Float evaluation with automatic fallback to the exact backend when the
/// alternating sum cancels more than 10 decimal digits.
template <std::floating_point Real>
Hyp3F2Result<Real> hyp3f2_auto(const Hyp3F2Params<Real>& p, bool* used_exact = nullptr) {
  auto r = hyp3f2_terminating(p);
  if (used_exact) *used_exact = false;
  if (r.cancellation_log10 > Real(cancellation_warning_log10)) {
    const Hyp3F2RationalParams rp{static_cast<std::int64_t>(std::llround(p.a1)), exact_rational(p.a2),
                                  exact_rational(p.a3), exact_rational(p.b1), exact_rational(p.b2)};
    r.value = to_real<Real>(hyp3f2_terminating_rational(rp));
    if (used_exact) *used_exact = true;
  }
  return r;
}

}  // namespace entmom
