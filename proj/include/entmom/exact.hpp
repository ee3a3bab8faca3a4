#pragma once

// Exact rational moments for positive integer q. Every Pochhammer and gamma
// ratio in the closed forms is then a ratio of integers.

#include <algorithm>
#include <cstdint>

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/specfun.hpp"

namespace entmom {

struct ExactMoments {
  RationalScalar e_L;
  RationalScalar e_L2;
  RationalScalar e_T;
  RationalScalar e_T2;
  RationalScalar var_T;
};

namespace exact {

/// 1/Γ(x) for integer x: zero at non-positive integers.
inline RationalScalar rgamma(std::int64_t x) {
  if (x <= 0) return 0;
  return RationalScalar(BigInt(1), factorial(x - 1));
}

/// m (n)_p ₃F₂(1-m, -p, 1-p; 1-n-p, 2; 1).
inline RationalScalar one_point_moment(const Dims& dims, std::int64_t p) {
  const std::int64_t m = dims.m();
  const std::int64_t n = dims.n();
  const auto f = hyp3f2_terminating_rational({1 - m, RationalScalar(-p), RationalScalar(1 - p),
                                              RationalScalar(1 - n - p), RationalScalar(2)});
  return RationalScalar(m) * pochhammer(RationalScalar(n), p) * f;
}

/// Unsigned block 𝔸_{i,j} by its series form.
inline RationalScalar block_A(int i, int j, const Dims& dims, std::int64_t q) {
  const std::int64_t alpha = dims.alpha();
  RationalScalar sum = 0;
  for (int k = 0; k <= std::min(i, j); ++k) {
    const auto ri = rgamma(q - i + k + 1);
    const auto rj = rgamma(q - j + k + 1);
    if (ri == 0 || rj == 0) continue;
    sum += RationalScalar(factorial(alpha + q + k)) * ri * rj /
           RationalScalar(factorial(i - k) * factorial(j - k) * factorial(k));
  }
  const BigInt gq = factorial(q);
  return sum * RationalScalar(gq * gq);
}

inline RationalScalar induced_I2(const Dims& dims, std::int64_t q) {
  const int m = dims.m();
  const std::int64_t alpha = dims.alpha();
  RationalScalar total = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i <= j; ++i) {
      const auto a = block_A(i, j, dims, q);
      const RationalScalar w(factorial(i) * factorial(j), factorial(alpha + i) * factorial(alpha + j));
      total += (i == j ? 1 : 2) * a * a * w;
    }
  }
  return total;
}

}  // namespace exact

/// Exact E_g[L], E_g[L²] and the converted fixed-trace moments for integer q ≥ 2.
inline ExactMoments exact_tsallis_moments(const Dims& dims, std::int64_t q) {
  if (q < 2) throw domain_error("exact mode requires a positive integer q >= 2 (q = 1 is the von Neumann branch)");
  ExactMoments r;
  r.e_L = exact::one_point_moment(dims, q);
  r.e_L2 = r.e_L * r.e_L + exact::one_point_moment(dims, 2 * q) - exact::induced_I2(dims, q);
  const RationalScalar mn(dims.mn());
  const RationalScalar a = 1 / pochhammer(mn, q);
  const RationalScalar b = 1 / pochhammer(mn, 2 * q);
  const RationalScalar qm1(q - 1);
  r.e_T = (1 - a * r.e_L) / qm1;
  r.e_T2 = (1 - 2 * a * r.e_L + b * r.e_L2) / (qm1 * qm1);
  r.var_T = r.e_T2 - r.e_T * r.e_T;
  return r;
}

/// Closed forms for the quadratic entropy (q = 2).
inline ExactMoments exact_q2_moments(const Dims& dims) {
  const RationalScalar m(dims.m());
  const RationalScalar n(dims.n());
  const RationalScalar mn = m * n;
  ExactMoments r;
  r.e_L = mn * (m + n);
  r.e_L2 = mn * (m * n * n * n + 2 * m * m * n * n + 4 * n * n + m * m * m * n + 10 * mn + 4 * m * m + 2);
  r.e_T = (mn - m - n + 1) / (mn + 1);
  r.e_T2 = (m - 1) * (n - 1) * (m * m * n * n - m * n * n - m * m * n + 5 * mn - 4 * n - 4 * m + 8) /
           ((mn + 1) * (mn + 2) * (mn + 3));
  r.var_T = 2 * (m * m - 1) * (n * n - 1) / ((mn + 1) * (mn + 1) * (mn + 2) * (mn + 3));
  return r;
}

}  // namespace entmom
