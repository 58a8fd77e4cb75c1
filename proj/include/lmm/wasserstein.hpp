#pragma once

#include <vector>

#include "lmm/core_model.hpp"

namespace lmm {

/// Piecewise-linear 1-Lipschitz function. Breakpoints are strictly
/// increasing with breakpoints.front() = 0 and breakpoints.back() = 1;
/// slopes[i] applies on [breakpoints[i], breakpoints[i+1]]. Outside [0,1]
/// the end slopes are continued linearly.
class LipschitzWitness {
 public:
  /// Throws InvalidWitnessError when a slope leaves [-1, 1].
  LipschitzWitness(std::vector<double> breakpoints, std::vector<double> slopes, double value_at_zero);
  static LipschitzWitness constant(double value);
  static LipschitzWitness linear(double slope, double value_at_zero);

  double operator()(double x) const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double value_at_zero() const { return values_.front(); }

 private:
  std::vector<double> breakpoints_, slopes_, values_;
};

/// W1 = ∫_0^1 |F_μ - F_ν|. Throws MassMismatchError when total masses
/// differ by more than 1e-10.
double w1(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// E_μ f - E_ν f.
double dual_value(const LipschitzWitness& f, const AtomicMeasure& mu, const AtomicMeasure& nu);

/// f(t) = ∫_0^t sign(F_ν - F_μ); attains the supremum in the dual.
LipschitzWitness optimal_witness(const AtomicMeasure& mu, const AtomicMeasure& nu);

}  // namespace lmm
