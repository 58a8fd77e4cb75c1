#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lmm/core_model.hpp"

namespace lmm {

/// Levels c_0 = 0, c_i = (1/(2n^A)) (1 + n^-r)^(i-1) up to the last one <= 1.
struct QuantGrid {
  std::int64_t n = 0;
  double A = 2.0;
  double r = 0.5;
  std::vector<double> levels;

  static QuantGrid build(std::int64_t n, double A = 2.0, double r = 0.5);
  double min_level() const { return levels.at(1); }
  /// Number of positive levels.
  std::size_t size() const { return levels.size() - 1; }
};

/// q_j = max{c_i <= p_j}. Throws DomainError if some 0 < p_j < min_level.
Vector quantize_to_grid(const Vector& p, const QuantGrid& grid);

/// chi^m(Poi(l1) || Poi(l2)) = exp(l2 ((l1/l2)^m - m (l1/l2 - 1) - 1)).
/// Returns +inf when l2 = 0 < l1; 1 when both are zero.
double chi_m_poisson(double lambda1, double lambda2, int m);
/// exp(l2 m^2 delta^2) with delta = |l1/l2 - 1|; valid when delta < 1/m.
double chi_m_bound(double lambda1, double lambda2, int m);
/// sum_t P(Poi(l2)=t) (P(Poi(l1)=t) / P(Poi(l2)=t))^m, summed in log space.
double chi_m_poisson_brute(double lambda1, double lambda2, int m);

/// (alpha, beta)-closeness of p' to p.
bool is_close(const Vector& p, const Vector& p_prime, double alpha, double beta);

struct RoundingResult {
  DiscreteDistribution p;
  bool used_fallback = false;
  /// P(p', phi) / P(p, phi); 1 when P(p, phi) = 0.
  double likelihood_ratio = 1.0;
};

/// Raises masses below 1/(2n^A) to that level and shrinks masses above
/// n^-A proportionally. When the result fails a check, every subset of the
/// small masses is tried as "raise" versus "zero". Throws ConstructionError
/// when nothing passes. n <= 12, k <= 8.
RoundingResult min_prob_round(const DiscreteDistribution& p, const Profile& phi, double A = 2.0);

struct PmlResult {
  /// Sorted descending, length k_max.
  Vector p;
  /// Exact P(p, phi) at the returned point (a lower bound on the PML value).
  double likelihood = 0.0;
  /// Best value on the resolution grid before coordinate ascent.
  double grid_likelihood = 0.0;
  int grid_resolution = 0;
  std::size_t grid_points = 0;
};

/// Exhaustive search over sorted masses in multiples of 1/grid_resolution,
/// then pairwise golden-section coordinate ascent. n <= 8, distinct(phi) <=
/// k_max <= 5; ResourceError otherwise.
PmlResult brute_force_pml(const Profile& phi, int k_max, int grid_resolution = 60, int ascent_steps = 200);

using ProfileEstimator = std::function<AtomicMeasure(const Profile&)>;

/// L(a, p) together with the distance d it is declared compatible with,
/// d(p, q) <= L(a, p) + L(a, q).
struct LossFunction {
  std::string name;
  std::function<double(const AtomicMeasure&, const DiscreteDistribution&)> loss;
  std::function<double(const DiscreteDistribution&, const DiscreteDistribution&)> distance;
  bool compatible = true;
};

/// L(a, p) = k W1(a, mu_p), d = sorted l1.
LossFunction sorted_l1_loss();

/// mu of the sorted empirical distribution, padded to k. With more than k
/// distinct symbols each observed symbol gets weight 1/distinct.
ProfileEstimator empirical_profile_estimator(Eigen::Index k);

struct GoodSet {
  std::vector<Profile> profiles;
  std::vector<double> probabilities;
  /// P(p, G).
  double probability = 0.0;
};

/// G = {phi in Phi_n : L(T(phi), p) <= eps}, n <= 10.
GoodSet good_set(const ProfileEstimator& estimator, const DiscreteDistribution& p, std::int64_t n, double eps,
                 const LossFunction& loss);

/// P(q, G) > delta implies d(q, p) <= 2 eps, for q on which the estimator
/// fails with probability at most delta (otherwise vacuously true). Throws ContractError for a loss
/// not declared compatible, or when compatibility fails on this instance.
bool check_goodset_lemma(const DiscreteDistribution& q, const DiscreteDistribution& p, const GoodSet& G, double eps,
                         double delta, const ProfileEstimator& estimator, const LossFunction& loss);

using Rational = boost::rational<std::int64_t>;

struct ChainParams {
  Rational c;
  int M = 0;
  /// r[0] = 1/2, r[1..M].
  std::vector<Rational> r;
  /// s[1..M], s[M+1] = 0; s[0] is unused and set to 0.
  std::vector<Rational> s;
  Rational t;
};

/// M is the smallest integer with 1/(12(3 2^(M-1) - 1)) < c. 0 < c < 1/12.
ChainParams chain_params(Rational c);
/// Defining equations and orderings, checked exactly.
bool chain_params_valid(const ChainParams& params);

/// P(Poi(n Q) = n) * P(q / Q, phi) with Q = sum q: profile probability under
/// independent h_j ~ Poi(n q_j), conditioned on the total count.
double poissonized_profile_probability(const Vector& q, const Profile& phi);

struct CoveringReport {
  int m = 2;
  std::int64_t n = 0;
  /// Exponent m / (m - 1) applied to the probability on the right.
  double exponent = 2.0;
  /// Constants from the chi^m argument: P(p,S) >= P(q,S)^e exp(-c_pq) and
  /// P(q,S) >= P(p,S)^e exp(-c_qp), with q normalized.
  double c_pq = 0.0;
  double c_qp = 0.0;
  /// Smallest constants that would make the inequalities hold on the
  /// subsets that were checked.
  double c_pq_empirical = 0.0;
  double c_qp_empirical = 0.0;
  double chi_pq = 1.0;
  double chi_qp = 1.0;
  std::size_t subsets_checked = 0;
  std::size_t violations = 0;
  /// Failures of chi^m >= p_h(S)^m / q_h(S)^(m-1) in either direction.
  std::size_t data_processing_violations = 0;
};

/// Covering inequalities between p and its grid image. Exhaustive over all
/// subsets of Phi_n when |Phi_n| <= 20, otherwise `sampled_subsets` random
/// subsets drawn with `seed`. n <= 8.
CoveringReport check_covering(const DiscreteDistribution& p, const QuantGrid& grid, int m = 2,
                              std::size_t sampled_subsets = 4096, std::uint64_t seed = 1);

}  // namespace lmm
