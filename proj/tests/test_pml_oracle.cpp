#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lmm/errors.hpp"
#include "lmm/pml_oracle.hpp"

using namespace lmm;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector random_simplex(std::mt19937_64& rng, int k) {
  std::exponential_distribution<double> e(1.0);
  Vector v(k);
  for (int i = 0; i < k; ++i) v[i] = e(rng);
  return v / v.sum();
}

// Random p whose positive masses are all at least `floor`.
Vector random_m0(std::mt19937_64& rng, int k, double floor) {
  Vector v = random_simplex(rng, k);
  return (v * (1.0 - k * floor)).array() + floor;
}

}  // namespace

TEST(QuantGrid, LevelsAndSize) {
  const auto g = QuantGrid::build(6);
  EXPECT_EQ(g.levels[0], 0.0);
  EXPECT_DOUBLE_EQ(g.min_level(), 1.0 / 72.0);
  const double ratio = 1.0 + std::pow(6.0, -0.5);
  for (std::size_t i = 2; i < g.levels.size(); ++i) EXPECT_NEAR(g.levels[i] / g.levels[i - 1], ratio, 1e-12);
  EXPECT_LE(g.levels.back(), 1.0);
  EXPECT_GT(g.levels.back() * ratio, 1.0);
  for (std::int64_t n : {4, 8, 64, 1024}) {
    const auto h = QuantGrid::build(n);
    const double scale = std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n));
    EXPECT_GT(static_cast<double>(h.size()) / scale, 0.5);
    EXPECT_LT(static_cast<double>(h.size()) / scale, 10.0);
  }
}

TEST(QuantizeToGrid, Examples) {
  const auto g = QuantGrid::build(6);
  const double c5 = g.levels[5], c6 = g.levels[6];
  const Vector p = vec({c5, 0.0, 0.5 * (c5 + c6), 1.0 - c5 - 0.5 * (c5 + c6)});
  const Vector q = quantize_to_grid(p, g);
  EXPECT_EQ(q[0], c5);
  EXPECT_EQ(q[1], 0.0);
  EXPECT_EQ(q[2], c5);
  const double dev = std::pow(6.0, -0.5);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    EXPECT_LE(q[i], p[i]);
    EXPECT_LE(p[i] / q[i] - 1.0, dev + 1e-12);
  }
  EXPECT_GE(q.sum(), 1.0 - dev);
  EXPECT_LE(q.sum(), 1.0);
  EXPECT_THROW(quantize_to_grid(vec({0.001, 0.999}), g), DomainError);
}

TEST(ChiM, Examples) {
  EXPECT_DOUBLE_EQ(chi_m_poisson(3.0, 3.0, 2), 1.0);
  EXPECT_NEAR(chi_m_poisson(2.0, 1.0, 2), std::exp(1.0), 1e-15);
  EXPECT_NEAR(chi_m_poisson_brute(2.0, 1.0, 2), std::exp(1.0), 1e-8);
  EXPECT_LE(chi_m_poisson(1.1, 1.0, 2), std::exp(0.04));
  EXPECT_NEAR(chi_m_bound(1.1, 1.0, 2), std::exp(0.04), 1e-15);
  EXPECT_EQ(chi_m_poisson(1.0, 0.0, 2), std::numeric_limits<double>::infinity());
}

TEST(ChiM, ClosedFormMatchesSumAndBound) {
  const double lambdas[] = {0.5, 1.0, 5.0, 20.0};
  for (double l1 : lambdas)
    for (double l2 : lambdas)
      for (int m : {2, 3, 5}) {
        const double closed = chi_m_poisson(l1, l2, m);
        if (!std::isfinite(closed) || closed > 1e300) continue;
        EXPECT_NEAR(chi_m_poisson_brute(l1, l2, m) / closed, 1.0, 1e-8) << l1 << " " << l2 << " " << m;
        if (std::fabs(l1 / l2 - 1.0) < 1.0 / m) EXPECT_LE(closed, chi_m_bound(l1, l2, m) * (1 + 1e-12));
      }
}

TEST(IsClose, Examples) {
  const Vector p = vec({0.5, 0.5});
  EXPECT_TRUE(is_close(p, p, 0.1, 0.3));
  EXPECT_TRUE(is_close(p, vec({0.5, 0.4}), 0.1, 0.3));
  EXPECT_FALSE(is_close(p, vec({0.5, 0.3}), 0.1, 0.3));
  EXPECT_FALSE(is_close(p, vec({0.5, 0.6}), 0.1, 0.3));
  EXPECT_FALSE(is_close(vec({0.0, 1.0}), vec({0.1, 0.9}), 0.1, 0.3));
  EXPECT_FALSE(is_close(vec({0.05, 0.95}), vec({0.2, 0.8}), 0.1, 0.3));
  EXPECT_THROW(is_close(p, vec({1.0}), 0.1, 0.3), DomainError);
}

TEST(MinProbRound, Examples) {
  const Profile phi({2, 2, 0, 0, 0, 0});
  const DiscreteDistribution already(vec({0.25, 0.25, 0.5}));
  const auto same = min_prob_round(already, phi);
  EXPECT_EQ(same.p.masses(), already.masses());
  const auto pm = DiscreteDistribution::point_mass(4);
  EXPECT_EQ(min_prob_round(pm, Profile({0, 0, 0, 0, 0, 1})).p.masses(), pm.masses());

  const double floor = 1.0 / 72.0, alpha = 1.0 / 36.0;
  const DiscreteDistribution tiny(vec({0.001, 0.399, 0.6}));
  const auto r = min_prob_round(tiny, phi);
  EXPECT_DOUBLE_EQ(r.p[0], floor);
  EXPECT_NEAR(r.p.masses().sum(), 1.0, 1e-12);
  EXPECT_NEAR(r.p[1] / r.p[2], 0.399 / 0.6, 1e-12);
  EXPECT_TRUE(is_close(tiny.masses(), r.p.masses(), alpha, 3.0 / 6.0));
  EXPECT_GE(profile_probability(r.p, phi), std::exp(-6.0) * profile_probability(tiny, phi));
}

TEST(MinProbRound, RandomInstancesPassAllChecks) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 11);
    const auto profiles = enumerate_profiles(n);
    const auto& phi = profiles[rng() % profiles.size()];
    const int k = 2 + static_cast<int>(rng() % 7);
    Vector p = random_simplex(rng, k);
    const double nA = std::pow(static_cast<double>(n), -2.0);
    for (int i = 0; i < k; ++i)
      if (U(rng) < 0.3) p[i] = 0.5 * nA * U(rng);
    p /= p.sum();
    const DiscreteDistribution P(p);
    const auto r = min_prob_round(P, phi);
    for (Eigen::Index i = 0; i < r.p.support_size(); ++i)
      if (r.p[i] > 0.0) EXPECT_GE(r.p[i], 0.5 * nA * (1 - 1e-12));
    EXPECT_TRUE(is_close(p, r.p.masses(), nA, 3.0 * std::sqrt(nA)));
    EXPECT_GE(profile_probability(r.p, phi), std::exp(-6.0) * profile_probability(P, phi) * (1 - 1e-12));
  }
}

TEST(BruteForcePml, Examples) {
  const auto a = brute_force_pml(Profile({0, 0, 0, 1}), 3);
  EXPECT_NEAR(a.likelihood, 1.0, 1e-12);
  EXPECT_NEAR(a.p[0], 1.0, 1e-9);
  const auto b = brute_force_pml(Profile({2, 0}), 2);
  EXPECT_NEAR(b.likelihood, 0.5, 1e-9);
  EXPECT_NEAR(b.p[0], 0.5, 1e-4);
  const auto c = brute_force_pml(Profile({2, 0}), 4);
  EXPECT_NEAR(c.likelihood, 0.75, 1e-9);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(c.p[i], 0.25, 1e-3);
  EXPECT_GE(c.likelihood, c.grid_likelihood);
  EXPECT_EQ(c.grid_resolution, 60);
}

TEST(BruteForcePml, Caps) {
  EXPECT_THROW(brute_force_pml(Profile(std::vector<std::int64_t>{9, 0, 0, 0, 0, 0, 0, 0, 0}), 5), ResourceError);
  EXPECT_THROW(brute_force_pml(Profile({2, 0}), 6), ResourceError);
  EXPECT_THROW(brute_force_pml(Profile({3, 0, 0}), 2), DomainError);
}

TEST(BruteForcePml, BeatsRandomDistributions) {
  std::mt19937_64 rng(67);
  for (const auto& phi : enumerate_profiles(5)) {
    const int k = std::max<int>(3, static_cast<int>(phi.distinct()));
    const auto r = brute_force_pml(phi, k);
    for (int i = 0; i < 200; ++i) {
      const DiscreteDistribution q(random_simplex(rng, k));
      EXPECT_GE(r.likelihood, profile_probability(q, phi) * 0.98);
    }
  }
}

TEST(GoodSet, Examples) {
  const auto loss = sorted_l1_loss();
  const auto est = empirical_profile_estimator(3);
  const DiscreteDistribution p(vec({0.2, 0.3, 0.5}));
  const auto all = good_set(est, p, 5, 10.0, loss);
  EXPECT_EQ(all.profiles.size(), enumerate_profiles(5).size());
  EXPECT_NEAR(all.probability, 1.0, 1e-12);
  const auto tight = good_set(est, p, 5, 0.0, loss);
  EXPECT_LT(tight.probability, 1.0);

  const auto pm = DiscreteDistribution::point_mass(3);
  const auto g = good_set(est, pm, 4, 0.1, loss);
  ASSERT_EQ(g.profiles.size(), 1u);
  EXPECT_EQ(g.profiles[0], Profile({0, 0, 0, 1}));
  EXPECT_NEAR(g.probability, 1.0, 1e-12);
}

TEST(GoodSetImplication, NoCounterexamples) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto loss = sorted_l1_loss();
  for (int rep = 0; rep < 2000; ++rep) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 7);
    const int k = 2 + static_cast<int>(rng() % 4);
    const auto est = empirical_profile_estimator(k);
    const DiscreteDistribution p(random_simplex(rng, k)), q(random_simplex(rng, k));
    const double eps = 2.0 * U(rng), delta = U(rng);
    const auto G = good_set(est, p, n, eps, loss);
    EXPECT_TRUE(check_goodset_lemma(q, p, G, eps, delta, est, loss));
    EXPECT_TRUE(check_goodset_lemma(p, p, G, eps, delta, est, loss));
  }
}

TEST(GoodSetImplication, IncompatibleLossRejected) {
  auto loss = sorted_l1_loss();
  loss.compatible = false;
  const auto est = empirical_profile_estimator(2);
  const auto p = DiscreteDistribution::uniform(2);
  const auto G = good_set(est, p, 3, 0.5, sorted_l1_loss());
  EXPECT_THROW(check_goodset_lemma(p, p, G, 0.5, 0.1, est, loss), ContractError);
  auto broken = sorted_l1_loss();
  broken.loss = [](const AtomicMeasure&, const DiscreteDistribution&) { return 0.0; };
  const DiscreteDistribution q(vec({0.9, 0.1}));
  EXPECT_THROW(check_goodset_lemma(q, p, G, 0.5, 0.1, est, broken), ContractError);
}

TEST(ChainParams, Examples) {
  const auto P = chain_params(Rational(1, 24));
  EXPECT_EQ(P.M, 2);
  EXPECT_EQ(P.r[0], Rational(1, 2));
  EXPECT_EQ(P.s[static_cast<std::size_t>(P.M + 1)], Rational(0));
  EXPECT_EQ(P.t, Rational(1, 3) + Rational(1, 12 * (3 * 2 - 1)));
  for (auto c : {Rational(1, 24), Rational(1, 48), Rational(1, 100)}) {
    const auto Q = chain_params(c);
    EXPECT_TRUE(chain_params_valid(Q));
    for (int m = 1; m <= Q.M; ++m) {
      const auto rm = Q.r[static_cast<std::size_t>(m)], sm = Q.s[static_cast<std::size_t>(m)];
      EXPECT_EQ(1 - 2 * rm + sm, Q.t);
      EXPECT_EQ(Q.r[static_cast<std::size_t>(m - 1)] - sm, Q.t);
      EXPECT_LT(rm, Rational(5, 12));
      EXPECT_GT(rm, Rational(1, 3));
      EXPECT_GT(sm, Rational(0));
      EXPECT_LT(sm, Rational(1, 6));
    }
    EXPECT_LT(Q.t, Rational(1, 3) + c);
  }
  EXPECT_THROW(chain_params(Rational(1, 12)), DomainError);
  EXPECT_THROW(chain_params(Rational(0)), DomainError);
}

TEST(Covering, SmallInstancesHaveNoViolations) {
  std::mt19937_64 rng(73);
  for (std::int64_t n : {3, 4, 5}) {
    const auto grid = QuantGrid::build(n);
    for (int rep = 0; rep < 5; ++rep) {
      const DiscreteDistribution p(random_m0(rng, 2 + static_cast<int>(rng() % 3), grid.min_level()));
      const auto r = check_covering(p, grid);
      EXPECT_EQ(r.violations, 0u);
      EXPECT_EQ(r.data_processing_violations, 0u);
      EXPECT_EQ(r.subsets_checked, (std::size_t{1} << enumerate_profiles(n).size()) - 1);
      EXPECT_LE(r.c_pq_empirical, r.c_pq + 1e-9);
      EXPECT_LE(r.c_qp_empirical, r.c_qp + 1e-9);
    }
  }
}

TEST(Covering, PoissonizedProfileProbability) {
  const Vector q = vec({0.3, 0.5});
  const double Q = 0.8, n = 4;
  double total = 0.0;
  for (const auto& phi : enumerate_profiles(4)) total += poissonized_profile_probability(q, phi);
  EXPECT_NEAR(total, std::exp(-n * Q) * std::pow(n * Q, n) / 24.0, 1e-14);
}
