#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/log_scaled.hpp"
#include "entmom/specfun.hpp"

namespace entmom {

/// Generalized Laguerre polynomial L_k^{(alpha)}(x) by the three-term
/// recurrence (k+1)L_{k+1} = (2k+1+α-x)L_k - (k+α)L_{k-1}.
/// Negative degrees are identically zero.
template <std::floating_point Real>
Real laguerre_poly(int k, Real alpha, Real x) {
  if (k < 0) return Real(0);
  Real prev = 0;
  Real cur = 1;
  for (int j = 0; j < k; ++j) {
    const Real jj = static_cast<Real>(j);
    const Real next = ((2 * jj + 1 + alpha - x) * cur - (jj + alpha) * prev) / (jj + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Orthonormal Laguerre functions
///   φ_k(x) = L_k^{(α)}(x) · sqrt(k!/Γ(α+k+1)) · sqrt(x^α e^{-x})
/// for k = 0..count-1. The weight is folded into the starting value so the
/// recurrence never forms k!(α+k)! explicitly.
template <std::floating_point Real>
std::vector<Real> laguerre_functions(int count, Real alpha, Real x, bool with_weight = true) {
  std::vector<Real> phi(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0) return phi;
  Real log_start = -ln_gamma(alpha + 1) / 2;
  if (with_weight) {
    if (x == Real(0) && alpha > Real(0)) return std::vector<Real>(phi.size(), Real(0));
    const Real log_x_alpha = alpha == Real(0) ? Real(0) : alpha * std::log(x);
    log_start += (log_x_alpha - x) / 2;
  }
  phi[0] = std::exp(log_start);
  if (count > 1) phi[1] = (1 + alpha - x) * phi[0] / std::sqrt(1 + alpha);
  for (int k = 1; k + 1 < count; ++k) {
    const Real kk = static_cast<Real>(k);
    phi[k + 1] = ((2 * kk + 1 + alpha - x) * phi[k] - std::sqrt(kk * (kk + alpha)) * phi[k - 1]) /
                 std::sqrt((kk + 1) * (kk + 1 + alpha));
  }
  return phi;
}

/// Correlation kernel K(x, y) of the Laguerre ensemble with m eigenvalues
/// and weight x^{n-m} e^{-x}.
template <std::floating_point Real>
Real kernel_K(const Dims& dims, Real x, Real y) {
  if (x < 0 || y < 0) throw domain_error("kernel_K requires x >= 0 and y >= 0");
  const Real alpha = static_cast<Real>(dims.alpha());
  const auto px = laguerre_functions<Real>(dims.m(), alpha, x);
  const auto py = laguerre_functions<Real>(dims.m(), alpha, y);
  CompensatedSum<Real> acc;
  for (int k = 0; k < dims.m(); ++k) acc.add(px[k] * py[k]);
  return acc.value();
}

/// One-point function K(x, x) in the Christoffel–Darboux form
///   m!/(n-1)! x^{n-m} e^{-x} ((L_{m-1}^{(α+1)})² - L_{m-2}^{(α+1)} L_m^{(α+1)}),
/// with L_{-1} ≡ 0.
template <std::floating_point Real>
Real density_one_point(const Dims& dims, Real x) {
  if (x < 0) throw domain_error("density_one_point requires x >= 0");
  const int m = dims.m();
  const Real a1 = static_cast<Real>(dims.alpha() + 1);
  const Real lm1 = laguerre_poly(m - 1, a1, x);
  const Real bracket = lm1 * lm1 - laguerre_poly(m - 2, a1, x) * laguerre_poly(m, a1, x);
  if (bracket == Real(0)) return Real(0);
  if (x == Real(0)) {
    if (dims.alpha() > 0) return Real(0);
    return std::exp(ln_gamma<Real>(m + 1) - ln_gamma<Real>(dims.n())) * bracket;
  }
  const Real log_pref = ln_gamma<Real>(m + 1) - ln_gamma<Real>(dims.n()) +
                        static_cast<Real>(dims.alpha()) * std::log(x) - x;
  return std::exp(log_pref) * bracket;
}

/// ∫₀^∞ x^q e^{-x} L_s^{(α)}(x) L_t^{(β)}(x) dx by the finite sum
///   (-1)^{s+t} Σ_k C(q-α, s-k) C(q-β, t-k) Γ(k+q+1)/k!.
template <std::floating_point Real>
LogScaled<Real> schrodinger_A(int s, int t, Real alpha, Real beta, Real q_exp) {
  if (!(q_exp > -1)) throw domain_error("schrodinger_A requires q_exp > -1");
  if (s < 0 || t < 0) throw domain_error("schrodinger_A requires s, t >= 0");
  std::vector<LogScaled<Real>> terms;
  terms.reserve(static_cast<std::size_t>(std::min(s, t) + 1));
  for (int k = 0; k <= std::min(s, t); ++k) {
    const Real b1 = gen_binomial(q_exp - alpha, s - k);
    const Real b2 = gen_binomial(q_exp - beta, t - k);
    if (b1 == Real(0) || b2 == Real(0)) continue;
    const Real kk = static_cast<Real>(k);
    const auto g = LogScaled<Real>::from_log(1, ln_gamma(kk + q_exp + 1) - ln_gamma(kk + 1));
    terms.push_back(LogScaled<Real>::from_value(b1) * LogScaled<Real>::from_value(b2) * g);
  }
  auto sum = sum_log_scaled<Real>(terms).value;
  if ((s + t) % 2 != 0) sum = -sum;
  return sum;
}

/// Exact Schrödinger integral for a non-negative integer exponent.
inline RationalScalar schrodinger_A_rational(int s, int t, const RationalScalar& alpha, const RationalScalar& beta,
                                             std::int64_t q_exp) {
  if (q_exp < 0) throw domain_error("schrodinger_A_rational requires an integer q_exp >= 0");
  RationalScalar sum = 0;
  for (int k = 0; k <= std::min(s, t); ++k) {
    sum += gen_binomial(RationalScalar(q_exp) - alpha, s - k) * gen_binomial(RationalScalar(q_exp) - beta, t - k) *
           RationalScalar(factorial(k + q_exp), factorial(k));
  }
  return (s + t) % 2 == 0 ? sum : RationalScalar(-sum);
}

}  // namespace entmom
