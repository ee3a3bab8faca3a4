#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <numeric>
#include <vector>

#include "entmom/compensated_sum.hpp"
#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/laguerre.hpp"
#include "entmom/specfun.hpp"

namespace entmom {

/// Oracle configuration: Gauss–Laguerre rule with weight x^weight_exponent e^{-x}.
struct QuadratureSpec {
  int node_count = 32;
  double weight_exponent = 0.0;

  /// Rule that integrates x^{power} · (polynomial of degree poly_degree) · e^{-x}
  /// exactly: the fractional part of the power goes into the weight.
  static QuadratureSpec for_power(double power, int poly_degree, int min_nodes = 0) {
    QuadratureSpec s;
    const double whole = power >= 0 ? std::floor(power) : 0.0;
    s.weight_exponent = power - whole;
    const int degree = static_cast<int>(whole) + poly_degree;
    s.node_count = std::max({min_nodes, degree / 2 + 5, 8});
    return s;
  }
};

template <std::floating_point Real>
struct QuadratureRule {
  std::vector<Real> nodes;
  std::vector<Real> log_weights;
  Real weight_exponent = 0;
};

namespace detail {

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `diag` is overwritten with the eigenvalues (unsorted).
template <std::floating_point Real>
void tridiagonal_eigenvalues(std::vector<Real>& diag, std::vector<Real> off) {
  const int n = static_cast<int>(diag.size());
  off.push_back(0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const Real dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= std::numeric_limits<Real>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw numerical_error("tridiagonal_eigenvalues: QL iteration did not converge");
        Real g = (diag[l + 1] - diag[l]) / (2 * off[l]);
        Real r = std::hypot(g, Real(1));
        g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
        Real s = 1, c = 1, p = 0;
        int i = m - 1;
        for (; i >= l; --i) {
          Real f = s * off[i];
          const Real b = c * off[i];
          r = std::hypot(f, g);
          off[i + 1] = r;
          if (r == Real(0)) {
            diag[i + 1] -= p;
            off[m] = 0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == Real(0) && i >= l) continue;
        diag[l] -= p;
        off[l] = g;
        off[m] = 0;
      }
    } while (m != l);
  }
}

/// Orthonormal polynomials p_k for the weight x^w e^{-x}, without the weight,
/// run to degree n with periodic rescaling (p_k grows like e^{x/2}). Returns
/// p_{n-1}, p_n in a common scale and ln Σ_{k<n} p_k² unscaled.
template <std::floating_point Real>
struct OrthonormalTail {
  Real prev, last, log_sum_sq;
};

template <std::floating_point Real>
OrthonormalTail<Real> orthonormal_tail(int n, Real w, Real x) {
  constexpr Real big = Real(1e100);
  Real log_scale = 0;
  Real p_prev = 0;
  Real p = std::exp(-ln_gamma(w + 1) / 2);
  CompensatedSum<Real> sq;
  for (int k = 0; k < n; ++k) {
    sq.add(p * p);
    const Real kk = static_cast<Real>(k);
    const Real next = ((2 * kk + 1 + w - x) * p - std::sqrt(kk * (kk + w)) * p_prev) / std::sqrt((kk + 1) * (kk + 1 + w));
    p_prev = p;
    p = next;
    if (std::abs(p) > big) {
      p /= big;
      p_prev /= big;
      const Real carried = sq.value() / (big * big);
      sq = CompensatedSum<Real>{};
      sq.add(carried);
      log_scale += std::log(big);
    }
  }
  return {p_prev, p, std::log(sq.value()) + 2 * log_scale};
}

}  // namespace detail

/// Gauss–Laguerre rule for weight x^w e^{-x}, w > -1.
///
/// Nodes come from the Jacobi matrix (Golub–Welsch) and are polished by
/// Newton steps on L_N^{(w)}; weights use the Christoffel form
/// 1/Σ_{k<N} p_k(x)² over orthonormal polynomials, which stays accurate for
/// the exponentially small weights at large nodes.
template <std::floating_point Real>
QuadratureRule<Real> gauss_laguerre(int node_count, Real weight_exponent) {
  if (node_count < 1) throw domain_error("gauss_laguerre requires node_count >= 1");
  if (!(weight_exponent > -1)) throw domain_error("gauss_laguerre requires weight_exponent > -1");
  const Real w = weight_exponent;
  const int n = node_count;
  std::vector<Real> diag(n), off;
  for (int k = 0; k < n; ++k) diag[k] = 2 * static_cast<Real>(k) + 1 + w;
  for (int k = 1; k < n; ++k) off.push_back(std::sqrt(static_cast<Real>(k) * (static_cast<Real>(k) + w)));
  detail::tridiagonal_eigenvalues(diag, off);
  std::sort(diag.begin(), diag.end());

  QuadratureRule<Real> rule;
  rule.weight_exponent = w;
  const Real nn = static_cast<Real>(n);
  for (Real x : diag) {
    x = std::max(x, std::numeric_limits<Real>::min());
    for (int it = 0; it < 3; ++it) {
      const auto p = detail::orthonormal_tail(n, w, x);
      const Real denom = nn * p.last - std::sqrt(nn * (nn + w)) * p.prev;
      if (denom == Real(0)) break;
      const Real step = x * p.last / denom;
      const Real next = x - step;
      if (!(next > 0)) break;
      x = next;
      if (std::abs(step) <= 4 * std::numeric_limits<Real>::epsilon() * x) break;
    }
    rule.nodes.push_back(x);
    rule.log_weights.push_back(-detail::orthonormal_tail(n, w, x).log_sum_sq);
  }
  return rule;
}

/// ∫₀^∞ f(x) x^w e^{-x} dx with an N-point rule; f receives the node.
template <std::floating_point Real, class F>
Real integrate(const QuadratureRule<Real>& rule, F&& f) {
  CompensatedSum<Real> acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc.add(std::exp(rule.log_weights[i]) * f(rule.nodes[i]));
  return acc.value();
}

/// Gauss–Laguerre estimate of ∫₀^∞ x^p K(x,x) dx.
template <std::floating_point Real>
Real quad_induced_moment(const Dims& dims, Real p, const QuadratureSpec& spec) {
  if (!(p > -1)) throw domain_error("quad_induced_moment requires p > -1");
  const Real alpha = static_cast<Real>(dims.alpha());
  const auto rule = gauss_laguerre<Real>(spec.node_count, static_cast<Real>(spec.weight_exponent));
  const Real power = p + alpha - rule.weight_exponent;
  CompensatedSum<Real> acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Real x = rule.nodes[i];
    const auto phi = laguerre_functions<Real>(dims.m(), alpha, x, false);
    CompensatedSum<Real> sq;
    for (const Real v : phi) sq.add(v * v);
    acc.add(std::exp(rule.log_weights[i] + power * std::log(x)) * sq.value());
  }
  return acc.value();
}

template <std::floating_point Real>
QuadratureSpec default_induced_spec(const Dims& dims, Real p) {
  return QuadratureSpec::for_power(static_cast<double>(p) + dims.alpha(), 2 * (dims.m() - 1),
                                   dims.m() + static_cast<int>(std::ceil(std::abs(2 * static_cast<double>(p)))) + 10);
}

/// Tensor-product estimate of ∫∫ x^q y^q K(x,y)² dx dy.
///
/// With K(x,y) = (xy)^{α/2} e^{-(x+y)/2} Σ_k p_k(x)p_k(y) the double sum
/// collapses to the squared Frobenius norm of the Gram matrix
/// G_{kl} = ∫ x^{q+α} e^{-x} p_k p_l dx.
template <std::floating_point Real>
Real quad_I2(const Dims& dims, Real q, const QuadratureSpec& spec) {
  if (!(q > -1)) throw domain_error("quad_I2 requires q > -1");
  const int m = dims.m();
  const Real alpha = static_cast<Real>(dims.alpha());
  const auto rule = gauss_laguerre<Real>(spec.node_count, static_cast<Real>(spec.weight_exponent));
  const Real power = q + alpha - rule.weight_exponent;
  std::vector<CompensatedSum<Real>> gram(static_cast<std::size_t>(m * m));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Real x = rule.nodes[i];
    const Real wt = std::exp(rule.log_weights[i] + power * std::log(x));
    const auto phi = laguerre_functions<Real>(m, alpha, x, false);
    for (int k = 0; k < m; ++k) {
      for (int l = k; l < m; ++l) gram[k * m + l].add(wt * phi[k] * phi[l]);
    }
  }
  CompensatedSum<Real> acc;
  for (int k = 0; k < m; ++k) {
    for (int l = k; l < m; ++l) {
      const Real g = gram[k * m + l].value();
      acc.add((k == l ? 1 : 2) * g * g);
    }
  }
  return acc.value();
}

template <std::floating_point Real>
QuadratureSpec default_I2_spec(const Dims& dims, Real q) {
  return QuadratureSpec::for_power(static_cast<double>(q) + dims.alpha(), 2 * (dims.m() - 1),
                                   dims.m() + static_cast<int>(std::ceil(std::abs(2 * static_cast<double>(q)))) + 10);
}

/// Repeats `estimate` with doubled node counts until two successive values
/// agree to `rel_tol`. Returns the last estimate.
template <std::floating_point Real, class Estimate>
Real converge_by_doubling(QuadratureSpec spec, Estimate&& estimate, Real rel_tol = Real(1e-9),
                          int max_nodes = 1024) {
  Real prev = estimate(spec);
  while (spec.node_count * 2 <= max_nodes) {
    spec.node_count *= 2;
    const Real cur = estimate(spec);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
    prev = cur;
  }
  throw numerical_error("quadrature did not converge by node doubling");
}

}  // namespace entmom
