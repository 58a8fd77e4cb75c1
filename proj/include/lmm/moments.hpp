#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "lmm/core_model.hpp"
#include "lmm/intervals.hpp"

namespace lmm {

inline constexpr int kMaxDegree = 60;

/// All g_{d,center}(x) for d = 0..D with lattice step `step`:
///   g_d(x) = sum_{d'} C(d,d') (-center)^{d-d'} prod_{i<d'} (x - i*step).
/// Evaluated in quad precision with compensated summation.
std::vector<double> shifted_falling_all(int D, double center, double x, double step);

/// g_{d,x_m}(x) with step 2/n.
double g_eval(int d, double x_m, double x, double n);

/// Cut-off variant: the argument is clamped to [x_{m,L}, x_{m,R}].
double g_tilde_eval(int d, int m, double x, const IntervalScheme& scheme);

/// M_{m,d} = sum_j (p_j - x_m)^d P(Poi(n p_j / 2) in (n/2) I_m).
double smoothed_moment_true(const DiscreteDistribution& p, int m, int d, const IntervalScheme& scheme);

/// M̂_{m,d} = sum_j sum_{s in (n/2) I_m} P(B(h_j,1/2)=s) g̃_{d,x_m}((h_j - s)/(n/2)).
/// `clamp = false` uses the raw g (the unbiased variant).
double smoothed_moment_estimate(const Histogram& h, int m, int d, const IntervalScheme& scheme, bool clamp = true);

/// Per-symbol contribution of a single count value to M̂_{m,0..D}.
std::vector<double> count_moment_contribution(std::int64_t count, int m, int D, const IntervalScheme& scheme,
                                              bool clamp = true);

/// k_m = sum_j P(Poi(n p_j / 2) in (n/2) I_m).
double effective_support(const DiscreteDistribution& p, int m, const IntervalScheme& scheme);

/// D = max(1, round(c2 log n)).
int degree_from_c2(double n, double c2);

struct MomentTable {
  int D = 1;
  double c2 = 0.0;
  /// values(m-1, d).
  Eigen::MatrixXd values;
  std::optional<Eigen::MatrixXd> truth;

  int intervals() const { return static_cast<int>(values.rows()); }
  double operator()(int m, int d) const { return values(m - 1, d); }
};

MomentTable estimate_moment_table(const Histogram& h, const IntervalScheme& scheme, int D, bool clamp = true);
MomentTable true_moment_table(const DiscreteDistribution& p, const IntervalScheme& scheme, int D);

}  // namespace lmm
