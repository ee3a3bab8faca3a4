#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "entmom/entmom.hpp"

using namespace entmom;
using namespace entmom::mc;

TEST(Philox, KnownAnswer) {
  // Random123 kat_vectors: philox4x32 10 rounds.
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}),
            (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  CounterStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (int i = 0; i < 5; ++i) {
    const auto x = a.next_block();
    EXPECT_EQ(x, b.next_block());
    EXPECT_NE(x, c.next_block());
    EXPECT_NE(x, d.next_block());
  }
}

TEST(Philox, ComplexNormalMoments) {
  CounterStream rng(7, 0);
  MomentAccumulator re, abs2;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = rng.complex_normal();
    re.add(x);
    abs2.add(x * x + y * y);
  }
  EXPECT_NEAR(re.mean(), 0.0, 4 * std::sqrt(0.5 / n));
  EXPECT_NEAR(re.variance(), 0.5, 0.01);
  // |z|² is Exp(1): mean 1, variance 1.
  EXPECT_NEAR(abs2.mean(), 1.0, 4 / std::sqrt(double(n)));
}

TEST(Accumulator, MatchesTwoPassAndMerges) {
  std::mt19937_64 gen(5);
  std::lognormal_distribution<double> dist(0, 0.7);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = dist(gen);
  MomentAccumulator all, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 1234 ? left : right).add(xs[i]);
  }
  left.merge(right);
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double c2 = 0, c4 = 0;
  for (double x : xs) {
    c2 += (x - mean) * (x - mean);
    c4 += std::pow(x - mean, 4);
  }
  const double n = xs.size();
  for (const auto* acc : {&all, &left}) {
    EXPECT_NEAR(acc->mean(), mean, 1e-13);
    EXPECT_NEAR(acc->variance(), c2 / (n - 1), 1e-12);
    EXPECT_NEAR(acc->central4(), c4 / n, 1e-11);
  }
}

TEST(Eigen, ReconstructsGram) {
  CounterStream rng(99, 0);
  for (auto [m, n] : {std::pair{2, 2}, {3, 4}, {6, 9}, {12, 12}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto y = GinibreMatrix::sample(Dims(m, n), rng);
      const auto w = y.gram();
      const auto eig = hermitian_eigen(w, true);
      ASSERT_TRUE(eig.has_value());
      double err = 0;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          std::complex<double> s = 0;
          for (int k = 0; k < m; ++k) s += eig->vectors(i, k) * eig->values[k] * std::conj(eig->vectors(j, k));
          err += std::norm(s - w(i, j));
        }
      }
      EXPECT_LT(std::sqrt(err) / w.frobenius_norm(), 1e-10);
    }
  }
}

TEST(Eigen, DiagonalAndKnown) {
  HermitianMatrix a(2);
  a(0, 0) = 2;
  a(1, 1) = 2;
  a(0, 1) = std::complex<double>(0, 1);
  a(1, 0) = std::complex<double>(0, -1);
  auto eig = hermitian_eigen(a);
  ASSERT_TRUE(eig.has_value());
  auto v = eig->values;
  std::sort(v.begin(), v.end());
  EXPECT_NEAR(v[0], 1.0, 1e-14);
  EXPECT_NEAR(v[1], 3.0, 1e-14);
}

TEST(Sampler, NormalizedSpectrum) {
  CounterStream rng(1, 0);
  for (auto [m, n] : {std::pair{1, 3}, {2, 2}, {4, 7}, {8, 8}}) {
    for (int t = 0; t < 200; ++t) {
      const auto s = sample_spectrum(Dims(m, n), rng);
      ASSERT_TRUE(s.has_value());
      EXPECT_EQ(static_cast<int>(s->values.size()), m);
      EXPECT_NEAR(s->sum(), 1.0, 1e-12);
      for (double v : s->values) EXPECT_GE(v, 0.0);
      if (m == 1) {
        EXPECT_EQ(s->values[0], 1.0);
      }
    }
  }
}

TEST(Sampler, EntropyFunctionals) {
  EXPECT_EQ(tsallis_of(Spectrum{{1.0, 0.0, 0.0}}, 2.0), 0.0);
  EXPECT_NEAR(tsallis_of(Spectrum{{0.25, 0.25, 0.25, 0.25}}, 2.0), max_entropy(4, 2.0), 1e-15);
  EXPECT_NEAR(von_neumann_of(Spectrum{{0.5, 0.5}}), std::log(2.0), 1e-15);
  EXPECT_EQ(von_neumann_of(Spectrum{{1.0, 0.0}}), 0.0);
}

TEST(Sampler, ScaleInvariance) {
  // Scaling Y scales YY† by c² and leaves the normalized spectrum unchanged.
  CounterStream rng(3, 0);
  const auto y = GinibreMatrix::sample(Dims(3, 5), rng);
  auto w = y.gram();
  const auto s1 = normalized_spectrum(w);
  for (auto& z : w.data) z *= 37.5;
  const auto s2 = normalized_spectrum(w);
  ASSERT_TRUE(s1 && s2);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s1->values[i], s2->values[i], 1e-13);
}

TEST(RunMc, SeparableIsExactlyZero) {
  const auto e = run_mc({Dims(1, 3), 2.0, 10000, 5, 1});
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_EQ(e.variance, 0.0);
}

TEST(RunMc, Validation) {
  EXPECT_THROW(run_mc({Dims(2, 2), 2.0, 9999, 1, 1}), entmom::domain_error);
  EXPECT_THROW(run_mc({Dims(2, 2), 2.0, 10000, 1, 0}), entmom::domain_error);
  EXPECT_THROW(run_mc({Dims(2, 2), 0.0, 10000, 1, 1}), entmom::domain_error);
}

TEST(RunMc, Deterministic) {
  const McConfig cfg{Dims(2, 3), 1.5, 20000, 123, 3};
  EXPECT_EQ(run_mc(cfg), run_mc(cfg));
}

TEST(RunMc, WorkerCountInvariance) {
  const auto a = run_mc({Dims(2, 2), 2.0, 100000, 9, 1});
  const auto b = run_mc({Dims(2, 2), 2.0, 100000, 9, 4});
  EXPECT_EQ(b.workers, 4);
  EXPECT_LT(std::abs(a.mean - b.mean), 6 * std::hypot(a.se_mean, b.se_mean));
  EXPECT_LT(std::abs(a.variance - b.variance), 6 * std::hypot(a.se_variance, b.se_variance));
}

TEST(RunMc, FixedTraceLaw) {
  // E[Σλ²] = 1 - E[T_2] = 4/5 for (2,2); T_2 = 1 - Σλ².
  const auto e = run_mc({Dims(2, 2), 2.0, 200000, 31, 2});
  EXPECT_NEAR(1 - e.mean, 0.8, 4 * e.se_mean);
}

TEST(RunMc, SeedStability) {
  const auto a = run_mc({Dims(2, 2), 2.0, 100000, 1, 1});
  const auto b = run_mc({Dims(2, 2), 2.0, 100000, 2, 1});
  EXPECT_NE(a.mean, b.mean);
  EXPECT_LT(std::abs(a.mean - b.mean), 4 * std::hypot(a.se_mean, b.se_mean));
}

TEST(RunMc, NegativeOrderRejections) {
  const auto e = run_mc({Dims(2, 2), -0.3, 20000, 4, 1});
  EXPECT_EQ(e.samples + e.rejected, 20000u);
  const auto r = tsallis_variance(Dims(2, 2), -0.3);
  EXPECT_NEAR(e.mean, r.e_T, 5 * e.se_mean);
}
