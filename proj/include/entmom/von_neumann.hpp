#pragma once

// von Neumann entropy moments: the direct digamma/trigamma formulas, the
// independent route through the q → 1 limit of the Tsallis second-moment
// relation, and its numerical (Richardson) counterpart.

#include <cmath>

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/specfun.hpp"
#include "entmom/tsallis.hpp"

namespace entmom {

template <std::floating_point Real = double>
Real vn_mean(const Dims& dims) {
  const Real m = static_cast<Real>(dims.m());
  const Real n = static_cast<Real>(dims.n());
  return digamma(m * n + 1) - digamma(n) - (m + 1) / (2 * n);
}

template <std::floating_point Real = double>
Real vn_variance(const Dims& dims) {
  const Real m = static_cast<Real>(dims.m());
  const Real n = static_cast<Real>(dims.n());
  const Real mn = m * n;
  return -trigamma(mn + 1) + (m + n) / (mn + 1) * trigamma(n) - (m + 1) * (m + 2 * n + 1) / (4 * n * n * (mn + 1));
}

/// Intermediate quantities of the l'Hôpital assembly of E_f[S²]. E_g[R₂]
/// cancels between its two occurrences and is therefore never formed; the
/// `*_without_R2` members hold the remaining parts.
template <std::floating_point Real>
struct AppendixTerms {
  Real e_r;              // E_r[r]
  Real e_r2;             // E_r[r²]
  Real e_r2_ln;          // E_r[r² ln r]
  Real e_r2_ln2;         // E_r[r² ln² r]
  Real e_R;              // E_g[R]
  Real e_R_sq;           // E_g[R²]
  Real e_rR;             // E_g[rR] from E_r[r² ln r] - E_r[r²] E_f[S]
  Real e_rR_closed;      // E_g[rR] in closed form
  Real e_S;              // E_f[S]
  Real e_S2_without_R2;  // E_f[S₂] + E_g[R₂]/(mn)
  Real e_rR2_without_R2; // E_g[rR₂] - (mn+1) E_g[R₂]
  Real e_S_sq;           // E_f[S²]
};

template <std::floating_point Real = long double>
AppendixTerms<Real> vn_appendix_terms(const Dims& dims) {
  const Real m = static_cast<Real>(dims.m());
  const Real n = static_cast<Real>(dims.n());
  const Real mn = m * n;
  const Real p0n = digamma(n);
  const Real p1n = trigamma(n);
  const Real p0a = digamma(mn + 1);
  const Real p1a = trigamma(mn + 1);
  const Real p0b = digamma(mn + 2);
  const Real p1b = trigamma(mn + 2);

  AppendixTerms<Real> t{};
  // Gamma-distributed trace: E_r[r^k] = Γ(mn+k)/Γ(mn), and the log moments
  // ∫ e^{-r} r^{a-1} ln r = Γ(a)ψ₀(a), ∫ e^{-r} r^{a-1} ln² r = Γ(a)(ψ₁(a) + ψ₀²(a)).
  t.e_r = mn;
  t.e_r2 = mn * (mn + 1);
  t.e_r2_ln = mn * (mn + 1) * p0b;
  t.e_r2_ln2 = mn * (mn + 1) * (p1b + p0b * p0b);

  t.e_R = mn * p0n + m * (m + 1) / 2;
  t.e_R_sq = mn * (m + n) * p1n + mn * (mn + 1) * p0n * p0n + m * (m * m * n + mn + m + 2 * n + 1) * p0n +
             m * (m + 1) * (m * m + m + 2) / 4;

  t.e_S = vn_mean<Real>(dims);
  t.e_rR = t.e_r2_ln - t.e_r2 * t.e_S;
  t.e_rR_closed = mn * (mn + 1) * (p0n + 1 / (mn + 1) + (m + 1) / (2 * n));

  t.e_S2_without_R2 = p1a - p0a * p0a + 2 * p0a * (p0n + (m + 1) / (2 * n));
  t.e_rR2_without_R2 = t.e_r2_ln2 - 2 * t.e_r2_ln * t.e_S - t.e_r2 * t.e_S2_without_R2;

  const Real first = (2 * t.e_R * p0a + t.e_r * (p1a - p0a * p0a)) / mn;
  const Real second =
      (t.e_R_sq + t.e_rR2_without_R2 - 4 * t.e_rR * p0b - 2 * t.e_r2 * (p1b - p0b * p0b)) / (mn * (mn + 1));
  t.e_S_sq = first + second;
  return t;
}

/// V_f[S] assembled as E_f[S²] - E_f[S]² from the log-moment chain.
template <std::floating_point Real = double>
Real vn_variance_via_appendix(const Dims& dims) {
  const auto t = vn_appendix_terms<long double>(dims);
  return static_cast<Real>(t.e_S_sq - t.e_S * t.e_S);
}

/// Variance of the Tsallis entropy in working precision without the
/// near-q=1 guard. Used by the limit check only.
inline long double tsallis_variance_unguarded(const Dims& dims, long double q) {
  if (dims.m() == 1) return 0;
  return detail::general_moments(dims, q, nullptr, true).var_T;
}

/// Richardson extrapolation of V_f[T] to q = 1 from q = 1 ± eps and 1 ± eps/2.
/// The symmetric average cancels odd powers; one Richardson step removes eps².
inline double q1_limit_check(const Dims& dims, double eps) {
  if (!(eps > 0) || eps > 1e-2) throw domain_error("q1_limit_check requires 0 < eps <= 1e-2");
  const long double h = eps;
  auto sym = [&](long double step) {
    return (tsallis_variance_unguarded(dims, 1 + step) + tsallis_variance_unguarded(dims, 1 - step)) / 2;
  };
  return static_cast<double>((4 * sym(h / 2) - sym(h)) / 3);
}

/// Report for the von Neumann branch (q = 1): mean, second moment and variance of S.
inline MomentReport von_neumann_report(const Dims& dims) {
  MomentReport rep;
  rep.dims = dims;
  rep.q = 1;
  rep.method = Method::von_neumann;
  const long double mean = vn_mean<long double>(dims);
  const long double var = vn_variance<long double>(dims);
  const auto mn = static_cast<double>(dims.mn());
  rep.e_L = LogScaled<double>::from_value(mn);
  rep.e_L2 = LogScaled<double>::from_value(mn * (mn + 1));
  rep.e_T = static_cast<double>(mean);
  rep.e_T2 = static_cast<double>(var + mean * mean);
  rep.var_T = static_cast<double>(var);
  if (dims.m() == 1) {
    rep.e_T = rep.e_T2 = rep.var_T = 0;
    rep.cancellation_flags.push_back("separable");
  }
  return rep;
}

/// Dispatch: q = 1 goes to the von Neumann branch, anything else to tsallis_variance.
inline MomentReport entropy_moments(const Dims& dims, double q, const MomentOptions& opts = {}) {
  if (q == 1.0) return von_neumann_report(dims);
  return tsallis_variance(dims, q, opts);
}

}  // namespace entmom
