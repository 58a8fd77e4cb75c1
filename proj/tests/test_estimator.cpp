#include <gtest/gtest.h>

#include <cmath>

#include "lmm/errors.hpp"
#include "lmm/estimator.hpp"
#include "lmm/harness.hpp"
#include "lmm/wasserstein.hpp"

using namespace lmm;

namespace {

MomentTable zero_table(int M, int D) {
  MomentTable t;
  t.D = D;
  t.values = Eigen::MatrixXd::Zero(M, D + 1);
  return t;
}

bool supported_in_scheme(const AtomicMeasure& mu, const IntervalScheme& s) {
  for (const auto& a : mu.atoms()) {
    if (a.location == 0.0) continue;
    bool inside = false;
    for (const auto& iv : s.intervals()) inside |= a.location >= iv.enlarged_left - 1e-12 && a.location <= iv.enlarged_right + 1e-12;
    if (!inside) return false;
  }
  return true;
}

}  // namespace

TEST(BuildLp, SmallestInstanceShape) {
  const auto s = IntervalScheme::build(1000.0, kDefaultC1);
  ASSERT_EQ(s.size(), 1);
  const auto lp = build_lp(zero_table(1, 1), s, 5, 2);
  EXPECT_EQ(lp.weight_count, 2);
  EXPECT_EQ(lp.variable_count(), 2 + 2);
  EXPECT_EQ(lp.row_count(), 4 + 2);
  EXPECT_THROW(build_lp(zero_table(1, 2), s, 5, 3), DomainError);
  EXPECT_THROW(build_lp(zero_table(2, 1), s, 5, 4), ConfigError);
}

TEST(SolveLp, ZeroTargetsGiveZeroMeasure) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  const auto lp = build_lp(zero_table(s.size(), 3), s, 50, 16);
  const auto r = solve_lp(lp);
  EXPECT_EQ(r.solver_status, SolverStatus::optimal);
  EXPECT_EQ(r.objective_value, 0.0);
  EXPECT_EQ(r.measure.total_mass(), 0.0);
}

TEST(SolveLp, RecoversSingleGridAtom) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  const int k = 10, D = 2, G = 16;
  for (int m = 1; m <= s.size(); ++m) {
    auto targets = zero_table(s.size(), D);
    const auto probe = build_lp(targets, s, k, G);
    const double x = probe.locations[static_cast<std::size_t>(m - 1)][5];
    for (int d = 0; d <= D; ++d) targets.values(m - 1, d) = std::pow(x - s[m].center, d);
    const auto r = solve_lp(build_lp(targets, s, k, G));
    EXPECT_EQ(r.solver_status, SolverStatus::optimal);
    EXPECT_LE(r.objective_value, 1e-8);
    ASSERT_EQ(r.measure.size(), 1u) << m;
    EXPECT_NEAR(r.measure.atoms()[0].location, x, 1e-12);
    EXPECT_NEAR(r.measure.atoms()[0].weight, 1.0 / k, 1e-9);
  }
}

TEST(SurrogateLoss, Examples) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  const int k = 20, D = 3, M = s.size();
  std::vector<AtomicMeasure> empty(static_cast<std::size_t>(M));
  EXPECT_EQ(surrogate_loss(empty, zero_table(M, D), s, k), 0.0);

  const int m = 3;
  const double xm = s[m].center;
  auto comps = empty;
  comps[static_cast<std::size_t>(m - 1)] = dirac(xm, 1.0 / k);
  auto targets = zero_table(M, D);
  targets.values(m - 1, 0) = 1.0;
  EXPECT_NEAR(surrogate_loss(comps, targets, s, k), 0.0, 1e-15);
  const double eps = 1e-3;
  targets.values(m - 1, 1) += eps;
  EXPECT_NEAR(surrogate_loss(comps, targets, s, k), eps, 1e-15);

  comps[static_cast<std::size_t>(m - 1)] = dirac(0.99, 1.0 / k);
  EXPECT_THROW(surrogate_loss(comps, targets, s, k), ConstraintError);
}

TEST(SurrogateLoss, MatchesLpObjective) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  const auto p = DiscreteDistribution::uniform(500);
  const auto h = sample_poissonized(p, 10000, 4);
  const auto r = estimate_sorted_distribution(h, 500, s);
  EXPECT_NEAR(surrogate_loss(r.components, r.targets, s, 500), r.objective_value, 1e-8);
}

TEST(Estimator, MinimizesOverTheTrueCandidate) {
  const double n = 1e4;
  const auto s = IntervalScheme::build(n, kDefaultC1);
  const int D = degree_from_c2(n, 0.5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentConfig cfg;
    cfg.k = 300;
    cfg.family = seed % 2 ? Family::zipf : Family::two_level;
    const auto p = make_distribution(cfg);
    const auto h = sample_poissonized(p, static_cast<std::int64_t>(n), seed);
    const auto targets = estimate_moment_table(h, s, D);
    const auto nu = target_components(p, s);
    auto grid = GridSpec::adaptive(s, 300, D);
    for (int m = 1; m <= s.size(); ++m)
      for (const auto& a : nu[static_cast<std::size_t>(m - 1)].atoms()) grid.extra_points[static_cast<std::size_t>(m - 1)].push_back(a.location);
    const auto r = solve_lp(build_lp(targets, s, 300, grid));
    ASSERT_EQ(r.solver_status, SolverStatus::optimal);
    EXPECT_LE(r.objective_value, surrogate_loss(nu, targets, s, 300) + 1e-8) << seed;
  }
}

TEST(Estimator, PointMassSource) {
  const double n = 1e4;
  const auto s = IntervalScheme::build(n, kDefaultC1);
  const auto p = DiscreteDistribution::point_mass(1);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto h = sample_poissonized(p, static_cast<std::int64_t>(n), seed);
    const auto r = estimate_sorted_distribution(h, 1, s);
    EXPECT_GE(r.measure.mass_in(0.95, 1.0), 0.9) << seed;
  }
}

TEST(Estimator, EmptyHistogramGivesDiracAtZero) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  const auto r = estimate_sorted_distribution(Histogram(std::vector<std::int64_t>(40, 0)), 40, s);
  ASSERT_EQ(r.measure.size(), 1u);
  EXPECT_EQ(r.measure.atoms()[0].location, 0.0);
  EXPECT_NEAR(r.measure.atoms()[0].weight, 1.0, 1e-12);
}

TEST(Estimator, BeatsEmpiricalOnUniformWithKEqualN) {
  const std::int64_t n = 2000;
  const auto s = IntervalScheme::build(static_cast<double>(n), kDefaultC1);
  const auto p = DiscreteDistribution::uniform(n);
  const auto mu_p = measure_of(p);
  double lmm = 0.0, emp = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto h = sample_poissonized(p, n, seed);
    const auto r = estimate_sorted_distribution(h, static_cast<int>(n), s);
    EXPECT_TRUE(r.measure.is_probability(1e-9));
    EXPECT_TRUE(supported_in_scheme(r.measure, s));
    lmm += n * w1(r.measure, mu_p);
    emp += n * w1(empirical_measure(h, n), mu_p);
  }
  EXPECT_LE(lmm, emp);
}

TEST(Estimator, Deterministic) {
  const auto s = IntervalScheme::build(1e4, kDefaultC1);
  ExperimentConfig cfg;
  cfg.k = 1000;
  cfg.family = Family::zipf;
  const auto p = make_distribution(cfg);
  const auto h = sample_poissonized(p, 10000, 77);
  const auto a = estimate_sorted_distribution(h, 1000, s), b = estimate_sorted_distribution(h, 1000, s);
  ASSERT_EQ(a.measure.size(), b.measure.size());
  for (std::size_t i = 0; i < a.measure.size(); ++i) {
    EXPECT_EQ(a.measure.atoms()[i].location, b.measure.atoms()[i].location);
    EXPECT_EQ(a.measure.atoms()[i].weight, b.measure.atoms()[i].weight);
  }
  EXPECT_EQ(a.pivots, b.pivots);
}

TEST(Estimator, Preconditions) {
  const auto s = IntervalScheme::build(10.0, 1.0);
  EXPECT_THROW(estimate_sorted_distribution(Histogram({1, 2}), 2, s), DomainError);
  const auto big = IntervalScheme::build(1e4, kDefaultC1);
  EXPECT_THROW(estimate_sorted_distribution(Histogram({1, 2, 3}), 2, big), DomainError);
}
