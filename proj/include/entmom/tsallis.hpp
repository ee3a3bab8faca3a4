#pragma once

// Fixed-trace Tsallis moments from induced Laguerre moments, and the report
// that bundles mean, second moment and variance.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entmom/compensated_sum.hpp"
#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/exact.hpp"
#include "entmom/induced.hpp"
#include "entmom/log_scaled.hpp"
#include "entmom/specfun.hpp"

namespace entmom {

/// Working precision of the closed-form pipeline. Results are reported as double.
using WorkReal = long double;

enum class Method { general, quadratic, small_m, von_neumann };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::general: return "general";
    case Method::quadratic: return "quadratic";
    case Method::small_m: return "small_m";
    case Method::von_neumann: return "von_neumann";
  }
  return "unknown";
}

enum class EvalMode { automatic, floating, exact };

struct MomentOptions {
  EvalMode mode = EvalMode::automatic;
  /// Use the q = 2 and m ∈ {2, 3} closed forms (cross-checked against the
  /// general path) when they apply.
  bool fast_paths = true;
};

struct MomentReport {
  Dims dims{1, 1};
  double q = 0;
  LogScaled<double> e_L;
  LogScaled<double> e_L2;
  double e_T = 0;
  double e_T2 = 0;
  double var_T = 0;
  Method method = Method::general;
  Diagnostics cancellation_flags;
  std::optional<ExactMoments> exact;
};

/// Distance from q = 1 below which the (q-1)^k division is refused.
inline constexpr double near_one_threshold = 1e-3;

/// E_f[T^k] = Γ(mn)/(q-1)^k Σ_i C(k,i) (-1)^i E_g[L^i]/Γ(mn+qi).
///
/// `laguerre_moments[i]` holds E_g[L^i]; entry 0 must be 1. The alternating
/// bracket is summed first and divided by (q-1)^k last.
template <std::floating_point Real>
Real convert_moment(int k, const Dims& dims, Real q, std::span<const LogScaled<Real>> laguerre_moments,
                    bool allow_near_one = false) {
  if (k < 1) throw domain_error("convert_moment requires k >= 1");
  if (laguerre_moments.size() != static_cast<std::size_t>(k) + 1) {
    throw domain_error("convert_moment needs k+1 Laguerre moments (got " + std::to_string(laguerre_moments.size()) +
                       ")");
  }
  if (laguerre_moments[0].sign != 1 || std::abs(laguerre_moments[0].log_mag) > Real(1e-12)) {
    throw domain_error("convert_moment: moment of order 0 must equal 1");
  }
  if (q == Real(1)) throw domain_error("q = 1 is the von Neumann branch; use vn_mean / vn_variance");
  if (!allow_near_one && std::abs(q - 1) < Real(near_one_threshold)) {
    throw domain_error("|q - 1| < 1e-3 loses too many digits; use the von Neumann branch or q1_limit_check");
  }
  const Real mn = static_cast<Real>(dims.mn());
  CompensatedSum<Real> acc;
  Real binom = 1;
  for (int i = 0; i <= k; ++i) {
    const auto& li = laguerre_moments[static_cast<std::size_t>(i)];
    if (!li.is_zero()) {
      const Real mag = std::exp(ln_gamma_delta_ratio(mn, q * static_cast<Real>(i)) + li.log_mag);
      acc.add((i % 2 == 0 ? 1 : -1) * binom * static_cast<Real>(li.sign) * mag);
    }
    binom = binom * static_cast<Real>(k - i) / static_cast<Real>(i + 1);
  }
  return acc.value() / std::pow(q - 1, static_cast<Real>(k));
}

/// Largest Tsallis entropy, attained by the maximally entangled state:
/// (m^{q-1} - 1)/((q-1) m^{q-1}), and ln m at q = 1.
inline double max_entropy(int m, double q) {
  if (m < 1) throw domain_error("max_entropy requires m >= 1");
  if (q == 0.0) throw domain_error("max_entropy requires q != 0");
  if (q == 1.0) return std::log(static_cast<double>(m));
  return -std::expm1((1 - q) * std::log(static_cast<double>(m))) / (q - 1);
}

namespace detail {

inline bool is_positive_integer_order(double q) { return q >= 1 && q == std::floor(q) && q < 1e6; }

/// General-path moments in working precision, no q = 1 guard.
struct RawMoments {
  LogScaled<WorkReal> e_L;
  LogScaled<WorkReal> e_L2;
  WorkReal e_T = 0;
  WorkReal e_T2 = 0;
  WorkReal var_T = 0;
};

inline RawMoments fixed_trace_moments(const Dims& dims, const LogScaled<WorkReal>& e_L,
                                      const LogScaled<WorkReal>& e_L2, WorkReal q, bool allow_near_one) {
  RawMoments r{e_L, e_L2};
  const LogScaled<WorkReal> one = LogScaled<WorkReal>::from_value(1);
  const LogScaled<WorkReal> first[] = {one, e_L};
  const LogScaled<WorkReal> second[] = {one, e_L, e_L2};
  r.e_T = convert_moment<WorkReal>(1, dims, q, first, allow_near_one);
  r.e_T2 = convert_moment<WorkReal>(2, dims, q, second, allow_near_one);
  r.var_T = r.e_T2 - r.e_T * r.e_T;
  return r;
}

inline RawMoments general_moments(const Dims& dims, WorkReal q, Diagnostics* flags, bool allow_near_one) {
  const auto e_L = induced_L_mean(dims, q, flags);
  const auto e_L2 = induced_L_second(dims, q, flags);
  return fixed_trace_moments(dims, e_L, e_L2, q, allow_near_one);
}

inline bool close_rel(long double a, long double b, long double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline void fill_report(MomentReport& rep, const RawMoments& raw) {
  rep.e_L = LogScaled<double>::convert(raw.e_L);
  rep.e_L2 = LogScaled<double>::convert(raw.e_L2);
  rep.e_T = static_cast<double>(raw.e_T);
  rep.e_T2 = static_cast<double>(raw.e_T2);
  rep.var_T = static_cast<double>(raw.var_T);
}

inline void fill_report(MomentReport& rep, const ExactMoments& ex) {
  rep.e_L = LogScaled<double>::from_value(to_real<double>(ex.e_L));
  rep.e_L2 = LogScaled<double>::from_value(to_real<double>(ex.e_L2));
  rep.e_T = to_real<double>(ex.e_T);
  rep.e_T2 = to_real<double>(ex.e_T2);
  rep.var_T = to_real<double>(ex.var_T);
}

/// Agreement required between a fast path and the general path.
inline constexpr long double fast_path_tolerance = 1e-10L;
/// Auto mode computes exact moments when q is a positive integer and mn + 2q ≤ this.
inline constexpr double exact_auto_limit = 200;

}  // namespace detail

/// Closed-form report for the quadratic entropy; exact rationals attached.
inline MomentReport special_q2(const Dims& dims) {
  MomentReport rep;
  rep.dims = dims;
  rep.q = 2;
  rep.method = Method::quadratic;
  rep.exact = exact_q2_moments(dims);
  detail::fill_report(rep, *rep.exact);
  return rep;
}

/// Mean, second moment and variance of the Tsallis entropy of order q over
/// the fixed-trace ensemble, for q > -1/2, q ∉ {0, 1}.
inline MomentReport tsallis_variance(const Dims& dims, double q, const MomentOptions& opts = {}) {
  EntropyOrder order(q);
  if (!order.admits_variance()) throw domain_error("variance requires q > -0.5 (2q > -1)");
  if (order.is_von_neumann()) throw domain_error("q = 1 is the von Neumann branch; use vn_mean / vn_variance");
  if (std::abs(q - 1) < near_one_threshold) {
    throw domain_error("|q - 1| < 1e-3 loses too many digits; use the von Neumann branch or q1_limit_check");
  }

  MomentReport rep;
  rep.dims = dims;
  rep.q = q;
  Diagnostics& flags = rep.cancellation_flags;
  if (q < 0) detail::note(&flags, "q_outside_demonstrated_range");

  if (opts.mode == EvalMode::exact) {
    if (!detail::is_positive_integer_order(q)) throw domain_error("exact mode requires a positive integer q >= 2");
    rep.exact = exact_tsallis_moments(dims, static_cast<std::int64_t>(q));
    detail::fill_report(rep, *rep.exact);
    rep.method = Method::general;
    return rep;
  }

  if (dims.m() == 1) {
    // One eigenvalue equal to 1: T ≡ 0.
    rep.e_L = LogScaled<double>::convert(induced_L_mean<WorkReal>(dims, q, &flags));
    rep.e_L2 = LogScaled<double>::convert(induced_L_second<WorkReal>(dims, q, &flags));
    detail::note(&flags, "separable");
    return rep;
  }

  const auto general = detail::general_moments(dims, q, &flags, false);
  detail::RawMoments chosen = general;
  rep.method = Method::general;

  if (opts.fast_paths && q == 2.0) {
    const auto closed = exact_q2_moments(dims);
    detail::RawMoments fast{LogScaled<WorkReal>::from_value(to_real<WorkReal>(closed.e_L)),
                            LogScaled<WorkReal>::from_value(to_real<WorkReal>(closed.e_L2)),
                            to_real<WorkReal>(closed.e_T), to_real<WorkReal>(closed.e_T2),
                            to_real<WorkReal>(closed.var_T)};
    if (!detail::close_rel(fast.var_T, general.var_T, detail::fast_path_tolerance)) {
      detail::note(&flags, "quadratic_vs_general_mismatch");
    }
    chosen = fast;
    rep.exact = closed;
    rep.method = Method::quadratic;
  } else if (opts.fast_paths && (dims.m() == 2 || dims.m() == 3)) {
    const auto [sm_L, sm_L2] = special_small_m<WorkReal>(dims, q);
    const auto fast = detail::fixed_trace_moments(dims, sm_L, sm_L2, q, false);
    if (!detail::close_rel(sm_L.value(), general.e_L.value(), detail::fast_path_tolerance) ||
        !detail::close_rel(sm_L2.value(), general.e_L2.value(), detail::fast_path_tolerance)) {
      detail::note(&flags, "small_m_vs_general_mismatch");
    }
    chosen = fast;
    rep.method = Method::small_m;
  }
  detail::fill_report(rep, chosen);

  if (opts.mode == EvalMode::automatic && !rep.exact && detail::is_positive_integer_order(q) &&
      static_cast<double>(dims.mn()) + 2 * q <= detail::exact_auto_limit) {
    rep.exact = exact_tsallis_moments(dims, static_cast<std::int64_t>(q));
  }
  if (rep.exact && !detail::close_rel(to_real<WorkReal>(rep.exact->var_T), chosen.var_T, 1e-10L)) {
    detail::note(&flags, "float_vs_exact_mismatch: exact values reported");
    detail::fill_report(rep, *rep.exact);
  }
  return rep;
}

}  // namespace entmom
