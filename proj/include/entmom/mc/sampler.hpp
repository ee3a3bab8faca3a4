#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/mc/hermitian_jacobi.hpp"
#include "entmom/mc/philox.hpp"

namespace entmom::mc {

/// m×n matrix of standard complex normal entries (row-major).
struct GinibreMatrix {
  Dims dims;
  std::vector<std::complex<double>> entries;

  static GinibreMatrix sample(const Dims& dims, CounterStream& rng) {
    GinibreMatrix y{dims, {}};
    y.entries.resize(static_cast<std::size_t>(dims.m()) * dims.n());
    for (auto& z : y.entries) {
      const auto [re, im] = rng.complex_normal();
      z = {re, im};
    }
    return y;
  }

  /// Y Y†.
  HermitianMatrix gram() const {
    const int m = dims.m();
    const int n = dims.n();
    HermitianMatrix w(m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        std::complex<double> s = 0;
        for (int k = 0; k < n; ++k) s += entries[i * n + k] * std::conj(entries[j * n + k]);
        w(i, j) = s;
        w(j, i) = std::conj(s);
      }
    }
    return w;
  }
};

/// Eigenvalues of a fixed-trace matrix, sorted descending, summing to 1.
struct Spectrum {
  std::vector<double> values;

  double sum() const {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
};

/// Clip threshold: eigenvalues in [-1e-12, 0) are set to 0, anything more
/// negative marks the sample as failed.
inline constexpr double negative_clip = 1e-12;

/// Eigenvalues of W/tr(W) for a Hermitian positive semidefinite W, or nullopt
/// if the eigensolver fails or the result is not positive semidefinite.
inline std::optional<Spectrum> normalized_spectrum(const HermitianMatrix& w) {
  double trace = 0;
  for (int i = 0; i < w.size; ++i) trace += w(i, i).real();
  if (!(trace > 0)) return std::nullopt;
  HermitianMatrix x = w;
  for (auto& z : x.data) z /= trace;
  auto eig = hermitian_eigen(std::move(x));
  if (!eig) return std::nullopt;
  Spectrum s{std::move(eig->values)};
  for (double& v : s.values) {
    if (v < -negative_clip) return std::nullopt;
    if (v < 0) v = 0;
  }
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

/// Spectrum of Y Y†/tr(Y Y†) for a fresh Ginibre Y; nullopt marks a discarded sample.
inline std::optional<Spectrum> sample_spectrum(const Dims& dims, CounterStream& rng) {
  if (dims.m() == 1) {
    // The 1×1 normalized matrix is exactly 1; the draws keep the stream aligned.
    for (int k = 0; k < dims.n(); ++k) rng.complex_normal();
    return Spectrum{{1.0}};
  }
  return normalized_spectrum(GinibreMatrix::sample(dims, rng).gram());
}

/// Eigenvalues below this are treated as zero when q < 0.
inline constexpr double zero_eigenvalue = 1e-300;

/// T = (1 - Σ λ^q)/(q - 1), with 0^q = 0 for q > 0.
inline double tsallis_of(const Spectrum& spec, double q) {
  if (q == 0.0 || q == 1.0) throw domain_error("tsallis_of requires q != 0, 1");
  double s = 0;
  for (double v : spec.values) {
    if (v <= zero_eigenvalue) {
      if (q < 0) throw domain_error("tsallis_of: zero eigenvalue with q < 0 diverges");
      continue;
    }
    s += std::pow(v, q);
  }
  return (1 - s) / (q - 1);
}

/// S = -Σ λ ln λ with 0 ln 0 = 0.
inline double von_neumann_of(const Spectrum& spec) {
  double s = 0;
  for (double v : spec.values) {
    if (v > 0) s -= v * std::log(v);
  }
  return s;
}

}  // namespace entmom::mc
