#pragma once

// Independent reference computations for the tests: plain Simpson rules and
// explicit sums, sharing no code with the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

/// ∫_0^∞ f(x) dx through x = u^power, which smooths x^s singularities at 0.
inline double half_line(const std::function<double(double)>& f, double x_max = 400, int intervals = 40000,
                        int power = 2) {
  return simpson([&](double u) { return u > 0 ? f(std::pow(u, power)) * power * std::pow(u, power - 1) : 0.0; }, 0,
                 std::pow(x_max, 1.0 / power), intervals);
}

inline double binom_real(double top, int k) {
  if (k < 0) return 0;
  double r = 1;
  for (int i = 0; i < k; ++i) r *= (top - i) / (i + 1);
  return r;
}

/// L_k^{(a)}(x) from the explicit sum Σ_i (-1)^i C(k+a, k-i) x^i / i!.
inline double laguerre(int k, double a, double x) {
  double s = 0, fact = 1;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) fact *= i;
    s += (i % 2 ? -1 : 1) * binom_real(k + a, k - i) * std::pow(x, i) / fact;
  }
  return s;
}

/// φ_k(x) = L_k^{(a)}(x) sqrt(k!/Γ(k+a+1)) x^{a/2} e^{-x/2}.
inline double phi(int k, double a, double x) {
  return laguerre(k, a, x) * std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + a + 1) + a * std::log(x) - x));
}

inline double kernel(int m, int n, double x, double y) {
  double s = 0;
  for (int k = 0; k < m; ++k) s += phi(k, n - m, x) * phi(k, n - m, y);
  return s;
}

/// E_g[Σθ^q] = ∫ x^q K(x,x) dx.
inline double induced_mean(int m, int n, double q) {
  return half_line([&](double x) { return x > 0 ? std::pow(x, q) * kernel(m, n, x, x) : 0.0; });
}

/// E_g[(Σθ^q)²] = I1 + E[L]² − Σ_ij (∫ x^q φ_i φ_j)².
inline double induced_second(int m, int n, double q) {
  const double mean = induced_mean(m, n, q);
  const double i1 = induced_mean(m, n, 2 * q);
  double i2 = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double g = half_line(
          [&](double x) { return x > 0 ? std::pow(x, q) * phi(i, n - m, x) * phi(j, n - m, x) : 0.0; });
      i2 += g * g;
    }
  }
  return i1 + mean * mean - i2;
}

/// ψ₁ by direct summation with an Euler–Maclaurin tail.
inline double trigamma(double x) {
  double s = 0;
  const int terms = 1000;
  for (int k = 0; k < terms; ++k) s += 1 / ((x + k) * (x + k));
  const double z = x + terms;
  return s + 1 / z + 1 / (2 * z * z) + 1 / (6 * z * z * z) - 1 / (30 * std::pow(z, 5));
}

inline double harmonic(int n) {
  double s = 0;
  for (int k = 1; k <= n; ++k) s += 1.0 / k;
  return s;
}

}  // namespace oracle
