#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "entmom/dims.hpp"
#include "entmom/errors.hpp"
#include "entmom/mc/philox.hpp"
#include "entmom/mc/sampler.hpp"

namespace entmom::mc {

/// Single-pass central moments up to order four (Welford/Pébay updates),
/// mergeable.
class MomentAccumulator {
 public:
  void add(double x) {
    const double n1 = static_cast<double>(count_);
    ++count_;
    const double n = static_cast<double>(count_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * m2_ - 4 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2) - 3 * delta_n * m2_;
    m2_ += term1;
  }

  void merge(const MomentAccumulator& b) {
    if (b.count_ == 0) return;
    if (count_ == 0) {
      *this = b;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(b.count_);
    const double n = na + nb;
    const double delta = b.mean_ - mean_;
    const double d2 = delta * delta;
    const double d3 = d2 * delta;
    const double d4 = d2 * d2;
    const double m2 = m2_ + b.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + b.m3_ + d3 * na * nb * (na - nb) / (n * n) + 3 * delta * (na * b.m2_ - nb * m2_) / n;
    const double m4 = m4_ + b.m4_ + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6 * d2 * (na * na * b.m2_ + nb * nb * m2_) / (n * n) + 4 * delta * (na * b.m3_ - nb * m3_) / n;
    mean_ += delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    count_ += b.count_;
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  /// Central sample moments (divided by the count).
  double central2() const { return count_ ? m2_ / static_cast<double>(count_) : 0.0; }
  double central4() const { return count_ ? m4_ / static_cast<double>(count_) : 0.0; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0;
  double m2_ = 0;
  double m3_ = 0;
  double m4_ = 0;
};

struct McEstimate {
  double mean = 0;
  double variance = 0;
  double se_mean = 0;
  double se_variance = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double q = 0;
  int workers = 1;
  /// Samples lost to eigensolver failure.
  std::uint64_t discarded = 0;
  /// Samples rejected for a near-zero eigenvalue when q < 0.
  std::uint64_t rejected = 0;
  /// Set when rejections exceed 0.01%: the estimate is conditional on λ_min ≥ 1e-12.
  bool conditional = false;

  friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

struct McConfig {
  Dims dims{1, 1};
  double q = 2;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Rejection threshold on the smallest eigenvalue for q < 0.
inline constexpr double small_eigenvalue_reject = 1e-12;
/// Maximum tolerated fraction of discarded samples.
inline constexpr double max_discard_fraction = 1e-4;

namespace detail {

struct WorkerResult {
  MomentAccumulator acc;
  std::uint64_t discarded = 0;
  std::uint64_t rejected = 0;
};

inline WorkerResult run_worker(const McConfig& cfg, std::uint32_t worker, std::uint64_t count) {
  WorkerResult r;
  CounterStream rng(cfg.seed, worker);
  const bool von_neumann = cfg.q == 1.0;
  for (std::uint64_t s = 0; s < count; ++s) {
    auto spec = sample_spectrum(cfg.dims, rng);
    if (!spec) {
      ++r.discarded;
      continue;
    }
    if (cfg.q < 0 && spec->values.back() < small_eigenvalue_reject) {
      ++r.rejected;
      continue;
    }
    r.acc.add(von_neumann ? von_neumann_of(*spec) : tsallis_of(*spec, cfg.q));
  }
  return r;
}

}  // namespace detail

/// Monte Carlo estimate of the mean and variance of T (or S when q = 1).
///
/// Worker w draws from substream (seed, w) and owns samples
/// [w·N/W, (w+1)·N/W); partial results merge in worker order, so the result
/// is bit-identical for a fixed (seed, workers).
inline McEstimate run_mc(const McConfig& cfg) {
  if (cfg.samples < 10'000) throw domain_error("run_mc requires samples >= 10000");
  if (cfg.workers < 1) throw domain_error("run_mc requires workers >= 1");
  if (cfg.q != 1.0) EntropyOrder{cfg.q};
  const auto workers = static_cast<std::uint64_t>(cfg.workers);
  std::vector<detail::WorkerResult> parts(workers);
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * cfg.samples / workers;
      const std::uint64_t end = (w + 1) * cfg.samples / workers;
      pool.emplace_back([&parts, &cfg, w, begin, end] {
        parts[w] = detail::run_worker(cfg, static_cast<std::uint32_t>(w), end - begin);
      });
    }
  }
  MomentAccumulator total;
  McEstimate est;
  for (const auto& p : parts) {
    total.merge(p.acc);
    est.discarded += p.discarded;
    est.rejected += p.rejected;
  }
  const double n_total = static_cast<double>(cfg.samples);
  if (static_cast<double>(est.discarded) > max_discard_fraction * n_total) {
    throw numerical_error("run_mc: " + std::to_string(est.discarded) + " samples discarded (more than 0.01%)");
  }
  est.conditional = static_cast<double>(est.rejected) > max_discard_fraction * n_total;
  est.samples = total.count();
  est.seed = cfg.seed;
  est.q = cfg.q;
  est.workers = cfg.workers;
  est.mean = total.mean();
  est.variance = total.variance();
  const double n = static_cast<double>(est.samples);
  est.se_mean = std::sqrt(est.variance / n);
  const double c2 = total.central2();
  est.se_variance = std::sqrt(std::max(0.0, total.central4() - c2 * c2) / n);
  return est;
}

}  // namespace entmom::mc
