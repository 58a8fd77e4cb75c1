#include <gtest/gtest.h>

#include <cmath>

#include "lmm/errors.hpp"
#include "lmm/pmf.hpp"

using namespace lmm;

TEST(Pmf, PoissonAtZeroRate) { EXPECT_DOUBLE_EQ(poisson_pmf(0.0, 0), 1.0); EXPECT_EQ(poisson_pmf(0.0, 3), 0.0); }

TEST(Pmf, PoissonUnitRate) { EXPECT_NEAR(poisson_pmf(1.0, 1), std::exp(-1.0), 1e-15); }

TEST(Pmf, BinomialHalf) { EXPECT_NEAR(binomial_pmf(4, 0.5, 2), 0.375, 1e-15); }

TEST(Pmf, NegativeArgumentsRejected) {
  EXPECT_THROW(poisson_pmf(-1.0, 0), DomainError);
  EXPECT_THROW(poisson_pmf(1.0, -1), DomainError);
  EXPECT_THROW(binomial_pmf(-1, 0.5, 0), DomainError);
}

TEST(Pmf, PoissonNormalizesForLargeRates) {
  for (double lambda : {0.3, 5.0, 120.0, 1e4, 1e6, 1e7}) {
    const auto [lo, hi] = poisson_window(lambda);
    long double s = 0.0L;
    for (double v : poisson_pmf_range(lambda, lo, hi)) s += v;
    EXPECT_NEAR(static_cast<double>(s), 1.0, 1e-10) << lambda;
  }
}

TEST(Pmf, RangeMatchesPointwise) {
  const auto v = poisson_pmf_range(37.5, 10, 80);
  for (std::int64_t j = 10; j <= 80; ++j) EXPECT_NEAR(v[static_cast<std::size_t>(j - 10)] / poisson_pmf(37.5, j), 1.0, 1e-12);
  const auto b = binomial_pmf_range(200, 0.3, 0, 200);
  for (std::int64_t j = 0; j <= 200; j += 7)
    if (b[static_cast<std::size_t>(j)] > 1e-250) EXPECT_NEAR(b[static_cast<std::size_t>(j)] / binomial_pmf(200, 0.3, j), 1.0, 1e-11);
}

TEST(Pmf, IntervalProbabilityKeepsTailAccuracy) {
  // P(Poi(10) >= 60) computed directly against a long-double reference.
  long double ref = 0.0L;
  for (std::int64_t j = 60; j < 400; ++j) ref += std::exp(static_cast<long double>(poisson_log_pmf(10.0, j)));
  EXPECT_NEAR(poisson_interval_prob(10.0, 60, kUnbounded) / static_cast<double>(ref), 1.0, 1e-10);
  EXPECT_NEAR(poisson_interval_prob(10.0, 0, kUnbounded), 1.0, 1e-14);
  EXPECT_NEAR(binomial_interval_prob(10, 0.5, 0, 10), 1.0, 1e-14);
  EXPECT_NEAR(binomial_interval_prob(4, 0.5, 1, 2), 0.25 + 0.375, 1e-15);
}

TEST(Pmf, ChernoffExamples) {
  const auto t = poisson_tail(100.0, 1.0);
  EXPECT_NEAR(t.upper, std::exp(-100.0 / 3.0), 1e-25);
  const auto z = poisson_tail(0.0, 0.7);
  EXPECT_EQ(z.upper, 1.0);
  EXPECT_EQ(z.lower, 1.0);
  EXPECT_NEAR(poisson_tail(50.0, 0.5).lower, std::exp(-6.25), 1e-15);
  EXPECT_THROW(poisson_tail(1.0, 0.0), DomainError);
}

TEST(Pmf, ChernoffBoundsDominateExactTails) {
  for (double lambda : {1.0, 10.0, 100.0}) {
    for (double delta = 0.1; delta <= 2.0 + 1e-9; delta += 0.1) {
      const auto b = poisson_tail(lambda, delta);
      const auto up = static_cast<std::int64_t>(std::ceil((1.0 + delta) * lambda));
      EXPECT_LE(poisson_interval_prob(lambda, up, kUnbounded), b.upper * (1 + 1e-12)) << lambda << " " << delta;
      if (delta < 1.0) {
        const auto down = static_cast<std::int64_t>(std::floor((1.0 - delta) * lambda));
        EXPECT_LE(poisson_interval_prob(lambda, 0, down), b.lower * (1 + 1e-12)) << lambda << " " << delta;
      }
    }
  }
}
