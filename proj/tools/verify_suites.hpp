#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entmom::cli {

/// One cross-check: a computed value against an independent reference.
struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0;
  double reference = 0;
  /// Relative error, or absolute when `absolute` is set; for Monte Carlo
  /// checks the deviation in standard errors.
  double error = 0;
  double tolerance = 0;
  bool absolute = false;
  bool pass = false;
};

struct McSuiteConfig {
  int m = 2;
  int n = 2;
  double q = 2;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  int workers = 1;
};

/// Tolerances used by the suites.
inline constexpr double closed_form_tol = 1e-10;
inline constexpr double quadrature_tol = 1e-7;
inline constexpr double limit_tol = 1e-6;
inline constexpr double mc_sigmas = 4.0;

/// q = 2 general path vs closed form; m ∈ {2,3} closed forms vs general;
/// float vs exact rational moments.
std::vector<CheckResult> suite_closed_forms();
/// Closed-form E_g[L], E_g[L²] vs Gauss–Laguerre oracles.
std::vector<CheckResult> suite_quadrature();
/// Appendix assembly of V_f[S] vs the trigamma formula, m ≤ 8, n ≤ 12.
std::vector<CheckResult> suite_appendix();
/// Richardson q → 1 limit of V_f[T] vs V_f[S], m, n ≤ 6.
std::vector<CheckResult> suite_limit();
/// q = 1 degeneracies, m = 1 separability, exact orthogonality.
std::vector<CheckResult> suite_degeneracy();
/// Monte Carlo mean/variance vs analytic values.
std::vector<CheckResult> suite_mc(const McSuiteConfig& cfg);

}  // namespace entmom::cli
