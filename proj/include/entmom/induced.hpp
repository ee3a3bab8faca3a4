#pragma once

// Closed-form moments of the induced entropy L = Σ θᵢ^q over the Laguerre
// ensemble: E_g[L] as a terminating ₃F₂, and E_g[L²] from the one-point
// integral I₁, the kernel-squared integral I₂ and (E_g[L])².

#include <algorithm>
#include <cmath>
#include <concepts>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/log_scaled.hpp"
#include "entmom/specfun.hpp"

namespace entmom {

/// Free-form diagnostics attached to a result (cancellation, fallbacks).
using Diagnostics = std::vector<std::string>;

namespace detail {

inline void note(Diagnostics* flags, std::string msg) {
  if (flags && std::find(flags->begin(), flags->end(), msg) == flags->end()) flags->push_back(std::move(msg));
}

template <std::floating_point Real>
void check_first_moment_order(Real q) {
  if (!(q > -1)) throw domain_error("entropy order must satisfy q > -1");
  if (q == Real(0)) throw domain_error("entropy order q = 0 is excluded");
}

template <std::floating_point Real>
void check_second_moment_order(Real q) {
  check_first_moment_order(q);
  if (!(2 * q > -1)) throw domain_error("second moments require 2q > -1 (q > -0.5)");
}

/// m Γ(n+p)/(n-1)! ₃F₂(1-m, -p, 1-p; 1-n-p, 2; 1), i.e. ∫ x^p K(x,x) dx.
template <std::floating_point Real>
LogScaled<Real> one_point_moment(const Dims& dims, Real p, Diagnostics* flags) {
  const Real m = static_cast<Real>(dims.m());
  const Real n = static_cast<Real>(dims.n());
  bool used_exact = false;
  const auto f = hyp3f2_auto<Real>({1 - m, -p, 1 - p, 1 - n - p, Real(2)}, &used_exact);
  if (used_exact) {
    std::ostringstream os;
    os << "hyp3f2_cancellation(p=" << static_cast<double>(p) << "): exact fallback";
    note(flags, os.str());
  }
  const auto pref = LogScaled<Real>::from_log(1, std::log(m) - ln_gamma_delta_ratio(n, p));
  return pref * LogScaled<Real>::from_value(f.value);
}

template <std::floating_point Real>
Real ln_factorial(int k) {
  return ln_gamma(static_cast<Real>(k) + 1);
}

}  // namespace detail

/// E_g[L] = m Γ(n+q)/(n-1)! ₃F₂(1-m, -q, 1-q; 1-n-q, 2; 1), valid for q > -1, q ≠ 0.
template <std::floating_point Real>
LogScaled<Real> induced_L_mean(const Dims& dims, Real q, Diagnostics* flags = nullptr) {
  detail::check_first_moment_order(q);
  return detail::one_point_moment(dims, q, flags);
}

/// I₁ = ∫ x^{2q} K(x,x) dx: the first-moment formula evaluated at 2q.
template <std::floating_point Real>
LogScaled<Real> induced_I1(const Dims& dims, Real q, Diagnostics* flags = nullptr) {
  detail::check_second_moment_order(q);
  return detail::one_point_moment(dims, 2 * q, flags);
}

/// Series form of the Schrödinger block
///   Γ²(q+1) Σ_k Γ(α+q+k+1) / (Γ(q-i+k+1) Γ(q-j+k+1) (i-k)! (j-k)! k!)
/// with reciprocal gammas vanishing at their poles. Includes the (-1)^{i+j}
/// sign so the value equals ∫ x^{q+α} e^{-x} L_i^{(α)} L_j^{(α)} dx.
template <std::floating_point Real>
LogScaled<Real> block_A_series(int i, int j, const Dims& dims, Real q) {
  const Real alpha = static_cast<Real>(dims.alpha());
  std::vector<LogScaled<Real>> terms;
  for (int k = 0; k <= std::min(i, j); ++k) {
    const Real kk = static_cast<Real>(k);
    const auto ri = rgamma_scaled(q - static_cast<Real>(i) + kk + 1);
    const auto rj = rgamma_scaled(q - static_cast<Real>(j) + kk + 1);
    if (ri.is_zero() || rj.is_zero()) continue;
    const Real log_rest = ln_gamma(alpha + q + kk + 1) - detail::ln_factorial<Real>(i - k) -
                          detail::ln_factorial<Real>(j - k) - detail::ln_factorial<Real>(k);
    terms.push_back(ri * rj * LogScaled<Real>::from_log(1, log_rest));
  }
  auto sum = sum_log_scaled<Real>(terms).value;
  sum *= LogScaled<Real>::from_log(1, 2 * ln_gamma(q + 1));
  if ((i + j) % 2 != 0) sum = -sum;
  return sum;
}

/// The block 𝔸_{i,j} = A_{i,j}^{(α,α)}(α+q) entering I₂, in its terminating
/// ₃F₂ form
///   Γ²(q+1) Γ(α+q+1) / (Γ(q-i+1) Γ(q-j+1) i! j!) ₃F₂(-i, -j, α+q+1; q-i+1, q-j+1; 1),
/// signed as the integral ∫ x^{q+α} e^{-x} L_i^{(α)} L_j^{(α)} dx. When q-i+1 or
/// q-j+1 is a pole of Γ the series form is used instead.
template <std::floating_point Real>
LogScaled<Real> block_A(int i, int j, const Dims& dims, Real q, Diagnostics* flags = nullptr) {
  if (i < 0 || j < 0 || i >= dims.m() || j >= dims.m()) throw domain_error("block_A requires 0 <= i, j <= m-1");
  detail::check_first_moment_order(q);
  const Real bi = q - static_cast<Real>(i) + 1;
  const Real bj = q - static_cast<Real>(j) + 1;
  if (is_nonpositive_integer(bi) || is_nonpositive_integer(bj)) return block_A_series(i, j, dims, q);

  const Real alpha = static_cast<Real>(dims.alpha());
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  bool used_exact = false;
  const auto f = hyp3f2_auto<Real>({-static_cast<Real>(lo), -static_cast<Real>(hi), alpha + q + 1, bi, bj}, &used_exact);
  if (used_exact) detail::note(flags, "block_A_cancellation: exact fallback");
  const Real log_num = 2 * ln_gamma(q + 1) + ln_gamma(alpha + q + 1) - detail::ln_factorial<Real>(i) -
                       detail::ln_factorial<Real>(j);
  auto value = LogScaled<Real>::from_log(1, log_num) / (gamma_scaled(bi) * gamma_scaled(bj)) *
               LogScaled<Real>::from_value(f.value);
  if ((i + j) % 2 != 0) value = -value;
  return value;
}

/// The symmetric function
///   L(i,j) = ₃F₂(-i,-j,α+q+1; q-i+1,q-j+1; 1) / (Γ(q-i+1)Γ(q-j+1) sqrt(i! j! (α+i)! (α+j)!)),
/// obtained from block_A so poles are handled by the series form.
template <std::floating_point Real>
LogScaled<Real> L_ij(int i, int j, const Dims& dims, Real q, Diagnostics* flags = nullptr) {
  const Real alpha = static_cast<Real>(dims.alpha());
  auto a = block_A(i, j, dims, q, flags);
  if ((i + j) % 2 != 0) a = -a;
  const Real log_scale = (detail::ln_factorial<Real>(i) + detail::ln_factorial<Real>(j) -
                          ln_gamma(alpha + static_cast<Real>(i) + 1) - ln_gamma(alpha + static_cast<Real>(j) + 1)) /
                             2 -
                         2 * ln_gamma(q + 1) - ln_gamma(alpha + q + 1);
  return a * LogScaled<Real>::from_log(1, log_scale);
}

/// I₂ = ∫∫ x^q y^q K²(x,y) dx dy = Γ⁴(q+1)Γ²(α+q+1)(Σ_i L²(i,i) + 2 Σ_{i<j} L²(i,j)).
///
/// The off-diagonal L(i,j) are evaluated in both argument orders and a
/// diagnostic is raised if they disagree beyond 1e-10 relative.
template <std::floating_point Real>
LogScaled<Real> induced_I2(const Dims& dims, Real q, Diagnostics* flags = nullptr) {
  detail::check_first_moment_order(q);
  const int m = dims.m();
  const Real alpha = static_cast<Real>(dims.alpha());
  std::vector<LogScaled<Real>> squares;
  squares.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
  for (int j = 0; j < m; ++j) {
    squares.push_back(L_ij(j, j, dims, q, flags).pow(2));
  }
  for (int j = 1; j < m; ++j) {
    for (int i = 0; i < j; ++i) {
      const auto lij = L_ij(i, j, dims, q, flags);
      const auto lji = L_ij(j, i, dims, q, flags);
      const auto diff = lij - lji;
      if (!diff.is_zero() && (lij.is_zero() || diff.log_mag - lij.log_mag > std::log(Real(1e-10)))) {
        detail::note(flags, "L_ij_asymmetry");
      }
      auto sq = lij.pow(2);
      sq.log_mag += std::log(Real(2));
      squares.push_back(sq);
    }
  }
  auto total = sum_log_scaled<Real>(squares).value;
  return total * LogScaled<Real>::from_log(1, 4 * ln_gamma(q + 1) + 2 * ln_gamma(alpha + q + 1));
}

/// E_g[L²] = (E_g[L])² + I₁ - I₂, valid for q > -1/2, q ≠ 0.
template <std::floating_point Real>
LogScaled<Real> induced_L_second(const Dims& dims, Real q, Diagnostics* flags = nullptr) {
  detail::check_second_moment_order(q);
  const auto mean = induced_L_mean(dims, q, flags);
  const LogScaled<Real> parts[] = {mean.pow(2), induced_I1(dims, q, flags), -induced_I2(dims, q, flags)};
  const auto sum = sum_log_scaled<Real>(parts);
  if (sum.cancellation_log10 > Real(cancellation_warning_log10)) detail::note(flags, "second_moment_cancellation");
  return sum.value;
}

/// Explicit polynomial-in-(n, q) moments for m = 2 and m = 3.
template <std::floating_point Real>
std::pair<LogScaled<Real>, LogScaled<Real>> special_small_m(const Dims& dims, Real q) {
  detail::check_second_moment_order(q);
  const int m = dims.m();
  const Real n = static_cast<Real>(dims.n());
  using LS = LogScaled<Real>;
  const Real lf_n1 = ln_gamma(n);  // ln (n-1)!
  if (m == 2) {
    const LS mean = LS::from_value(q * q + q + 2 * n - 2) * LS::from_log(1, ln_gamma(q + n - 1) - lf_n1);
    const LS a = LS::from_log(1, ln_gamma(q + n - 1) + ln_gamma(q + n) - ln_gamma(n - 1));
    const LS b = LS::from_value(2 * q * q + q + n - 1) * LS::from_log(1, ln_gamma(2 * q + n - 1));
    const LS second = (a + b) * LS::from_log(1, std::log(Real(2)) - lf_n1);
    return {mean, second};
  }
  if (m == 3) {
    const Real p1 = 6 * n * (q * q + q - 3) + (q - 2) * (q - 1) * (q + 2) * (q + 3) + 6 * n * n;
    const LS mean = LS::from_value(p1) * LS::from_log(1, ln_gamma(q + n - 2) - std::log(Real(2)) - lf_n1);
    const Real q2 = q * q, q3 = q2 * q, q4 = q3 * q;
    const Real p2 = 6 * n * (q2 + q - 3) + q4 + 4 * q3 - 7 * q2 - 10 * q + 12 + 6 * n * n;
    const Real p3 = 3 * n * (4 * q2 + 2 * q - 3) + 8 * q4 + 8 * q3 - 14 * q2 - 8 * q + 6 + 3 * n * n;
    const LS a =
        LS::from_value(p2) * LS::from_log(1, ln_gamma(q + n - 2) + ln_gamma(q + n - 1) - lf_n1 - ln_gamma(n - 1));
    const LS b = LS::from_value(p3) * LS::from_log(1, ln_gamma(2 * q + n - 2) - lf_n1);
    return {mean, a + b};
  }
  throw domain_error("special_small_m supports m = 2 or m = 3 only (got m=" + std::to_string(m) + ")");
}

}  // namespace entmom
