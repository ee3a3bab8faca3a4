#pragma once

#include <cmath>
#include <string>

#include "entmom/errors.hpp"

namespace entmom {

/// Subsystem dimensions of a bipartite pure state, m ≤ n.
class Dims {
 public:
  Dims(int m, int n) : m_(m), n_(n) {
    if (m < 1) throw domain_error("dimension m must be >= 1 (got " + std::to_string(m) + ")");
    if (m > n) {
      throw domain_error("dimensions must satisfy m <= n (got m=" + std::to_string(m) +
                         ", n=" + std::to_string(n) + ")");
    }
  }

  int m() const { return m_; }
  int n() const { return n_; }
  /// Laguerre parameter n - m.
  int alpha() const { return n_ - m_; }
  long long mn() const { return static_cast<long long>(m_) * n_; }

  friend bool operator==(const Dims&, const Dims&) = default;

 private:
  int m_;
  int n_;
};

/// Tsallis order q with q > -1, q != 0. q = 1 denotes the von Neumann limit.
class EntropyOrder {
 public:
  explicit EntropyOrder(double q) : q_(q) {
    if (!std::isfinite(q)) throw domain_error("entropy order q must be finite");
    if (!(q > -1.0)) throw domain_error("entropy order must satisfy q > -1 (got " + std::to_string(q) + ")");
    if (q == 0.0) throw domain_error("entropy order q = 0 is excluded");
  }

  double value() const { return q_; }
  bool is_von_neumann() const { return q_ == 1.0; }
  /// Second moments need 2q > -1.
  bool admits_variance() const { return q_ > -0.5; }

 private:
  double q_;
};

}  // namespace entmom
