#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lmm/errors.hpp"
#include "lmm/intervals.hpp"
#include "lmm/pmf.hpp"

using namespace lmm;

TEST(IntervalScheme, SmallExampleEndpoints) {
  const double n = std::round(std::exp(4.0));
  const auto s = IntervalScheme::build(n, 1.0);
  const double u = std::log(n) / n;
  EXPECT_DOUBLE_EQ(s.unit(), u);
  EXPECT_DOUBLE_EQ(s[1].core_left, 0.0);
  EXPECT_NEAR(s[1].core_right, u, 1e-15);
  EXPECT_NEAR(s[2].core_left, u, 1e-15);
  EXPECT_NEAR(s[2].core_right, 4 * u, 1e-15);
  EXPECT_NEAR(s[2].center, 2.5 * u, 1e-15);
  EXPECT_EQ(s[1].center, 0.0);
  EXPECT_EQ(s[1].outer_left, 0.0);
  EXPECT_EQ(s[1].enlarged_left, 0.0);
}

TEST(IntervalScheme, DegenerateSchemeRejected) {
  EXPECT_THROW(IntervalScheme::build(20.0, 10.0), ConfigError);
  EXPECT_THROW(IntervalScheme::build(100.0, 0.0), DomainError);
}

class SchemeInvariants : public ::testing::TestWithParam<std::tuple<double, double, SchemeVariant>> {};

TEST_P(SchemeInvariants, PartitionNestingAndLengths) {
  const auto [n, c1, variant] = GetParam();
  const auto s = IntervalScheme::build(n, c1, variant);
  ASSERT_GE(s.size(), 1);
  EXPECT_EQ(s.size(), static_cast<int>(std::floor(std::sqrt(n / (c1 * std::log(n))))));
  EXPECT_EQ(s[s.size()].core_right, 1.0);
  for (int m = 1; m <= s.size(); ++m) {
    const auto& iv = s[m];
    if (m > 1) EXPECT_EQ(iv.core_left, s[m - 1].core_right);
    EXPECT_LE(iv.enlarged_left, iv.core_left);
    EXPECT_GE(iv.enlarged_right, iv.core_right);
    EXPECT_LE(iv.outer_left, iv.enlarged_left);
    EXPECT_GE(iv.outer_right, iv.enlarged_right);
    if (m >= 2) {
      EXPECT_GT(iv.enlarged_length(), s[m - 1].enlarged_length());
      const double outer = iv.outer_right - iv.outer_left;
      if (variant == SchemeVariant::estimator) {
        EXPECT_GE(outer, iv.enlarged_length());
        EXPECT_LE(outer, 2.0 * iv.enlarged_length());
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, SchemeInvariants,
                         ::testing::Values(std::make_tuple(1e3, 1.0, SchemeVariant::estimator),
                                           std::make_tuple(1e3, kDefaultC1, SchemeVariant::estimator),
                                           std::make_tuple(1e4, kDefaultC1, SchemeVariant::estimator),
                                           std::make_tuple(4096.0, 2.0, SchemeVariant::approximation),
                                           std::make_tuple(1e5, 5.0, SchemeVariant::approximation)));

TEST(Locate, BoundaryConventions) {
  const auto s = IntervalScheme::build(1e4, 1.0);
  EXPECT_EQ(s.locate(0.0), 1);
  EXPECT_EQ(s.locate(s[3].core_right), 3);
  EXPECT_EQ(s.locate(std::nextafter(s[3].core_left, 1.0)), 3);
  EXPECT_EQ(s.locate(s[3].core_left), 2);
  EXPECT_EQ(s.locate(1.0), s.size());
  EXPECT_THROW(s.locate(-0.1), RangeError);
  EXPECT_THROW(s.locate(1.5), RangeError);
}

TEST(Locate, PartitionProperty) {
  const auto s = IntervalScheme::build(1e4, 3.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = U(rng);
    int hits = 0;
    for (int m = 1; m <= s.size(); ++m) hits += (x > s[m].core_left || (m == 1 && x == 0.0)) && x <= s[m].core_right;
    ASSERT_EQ(hits, 1) << x;
    EXPECT_TRUE(x > s[s.locate(x)].core_left && x <= s[s.locate(x)].core_right);
  }
}

TEST(LatticeRange, PartitionsNaturalNumbers) {
  const auto s = IntervalScheme::build(5000.0, 2.0);
  const double scale = 2500.0;
  std::int64_t next = 0;
  for (int m = 1; m <= s.size(); ++m) {
    const auto [lo, hi] = s.lattice_range(m, scale);
    EXPECT_EQ(lo, next);
    if (m < s.size()) {
      EXPECT_GE(hi, lo - 1);
      next = hi + 1;
    } else {
      EXPECT_EQ(hi, kUnbounded);
    }
  }
}

TEST(Localization, Examples) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  ASSERT_GE(s.size(), 3);
  const double bound = std::pow(1e4, -5.0);
  for (int m = 2; m <= s.size(); ++m) {
    const auto t = localization_check(s, s[m].center, m);
    ASSERT_TRUE(t.tail_out.has_value());
    EXPECT_LE(*t.tail_out, bound) << m;
    EXPECT_FALSE(t.tail_in.has_value());
  }
  const auto zero = localization_check(s, 0.0, 1);
  ASSERT_TRUE(zero.tail_out.has_value());
  EXPECT_EQ(*zero.tail_out, 0.0);
  const auto far = localization_check(s, 0.9, 1);
  ASSERT_TRUE(far.tail_in.has_value());
  EXPECT_LE(*far.tail_in, bound);
}

TEST(Localization, DefaultConstantMeetsTailTarget) {
  for (double n : {1e3, 1e4}) {
    const auto s = IntervalScheme::build(n, kDefaultC1);
    EXPECT_LE(worst_localization_tail(s), std::pow(n, -5.0)) << n;
  }
}

TEST(Localization, SmallConstantFails) {
  // Sanity: the check is not vacuous.
  const auto s = IntervalScheme::build(1e4, 2.0);
  EXPECT_GT(worst_localization_tail(s), std::pow(1e4, -5.0));
}
