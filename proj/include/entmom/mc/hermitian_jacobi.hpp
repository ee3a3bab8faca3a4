#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace entmom::mc {

/// Dense row-major square complex matrix.
struct HermitianMatrix {
  int size = 0;
  std::vector<std::complex<double>> data;

  explicit HermitianMatrix(int n = 0) : size(n), data(static_cast<std::size_t>(n) * n) {}

  std::complex<double>& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * size + j]; }
  const std::complex<double>& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * size + j]; }

  double frobenius_norm() const {
    double s = 0;
    for (const auto& z : data) s += std::norm(z);
    return std::sqrt(s);
  }
};

struct EigenResult {
  std::vector<double> values;
  /// Column j is the eigenvector of values[j]; empty unless requested.
  HermitianMatrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Each rotation first removes the phase of a_pq, then applies the real
/// symmetric Jacobi rotation. Stops once the off-diagonal norm falls below
/// 1e-14·‖A‖_F. Returns nullopt if that does not happen within max_sweeps.
inline std::optional<EigenResult> hermitian_eigen(HermitianMatrix a, bool want_vectors = false, int max_sweeps = 100) {
  const int n = a.size;
  EigenResult out;
  if (want_vectors) {
    out.vectors = HermitianMatrix(n);
    for (int i = 0; i < n; ++i) out.vectors(i, i) = 1.0;
  }
  const double threshold = 1e-14 * a.frobenius_norm();
  auto off_norm = [&] {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = off_norm() <= threshold;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    out.sweeps = sweep + 1;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const std::complex<double> apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const std::complex<double> phase = apq / mag;  // e^{iφ}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = t * c;
        // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane; A ← U† A U.
        const std::complex<double> u_qp = -s * std::conj(phase);
        const std::complex<double> u_qq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) {
          const auto akp = a(k, p);
          const auto akq = a(k, q);
          a(k, p) = c * akp + akq * u_qp;
          a(k, q) = s * akp + akq * u_qq;
        }
        for (int k = 0; k < n; ++k) {
          const auto apk = a(p, k);
          const auto aqk = a(q, k);
          a(p, k) = c * apk + std::conj(u_qp) * aqk;
          a(q, k) = s * apk + std::conj(u_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (want_vectors) {
          auto& v = out.vectors;
          for (int k = 0; k < n; ++k) {
            const auto vkp = v(k, p);
            const auto vkq = v(k, q);
            v(k, p) = c * vkp + vkq * u_qp;
            v(k, q) = s * vkp + vkq * u_qq;
          }
        }
      }
    }
    converged = off_norm() <= threshold;
  }
  if (!converged) return std::nullopt;
  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = a(i, i).real();
  return out;
}

}  // namespace entmom::mc
