#include "lmm/wasserstein.hpp"

#include <algorithm>
#include <cmath>

#include "lmm/errors.hpp"

namespace lmm {

namespace {

constexpr double kMassTol = 1e-10;
constexpr double kSlopeTol = 1e-12;

void check_masses(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (std::fabs(mu.total_mass() - nu.total_mass()) > kMassTol)
    throw MassMismatchError("measures have different total mass");
}

// Walks the merged breakpoints of both CDFs. `segment(a, b, diff)` receives
// each interval [a, b] with diff = F_ν - F_μ on it.
template <class Fn>
void for_each_segment(const AtomicMeasure& mu, const AtomicMeasure& nu, Fn segment) {
  const auto& A = mu.atoms();
  const auto& B = nu.atoms();
  std::size_t i = 0, j = 0;
  double Fa = 0.0, Fb = 0.0, x = 0.0;
  while (true) {
    // Absorb atoms located at the current point.
    while (i < A.size() && A[i].location <= x) Fa += A[i++].weight;
    while (j < B.size() && B[j].location <= x) Fb += B[j++].weight;
    double next = 1.0;
    if (i < A.size()) next = std::min(next, A[i].location);
    if (j < B.size()) next = std::min(next, B[j].location);
    if (next > x) segment(x, next, Fb - Fa);
    if (next >= 1.0) break;
    x = next;
  }
}

}  // namespace

LipschitzWitness::LipschitzWitness(std::vector<double> breakpoints, std::vector<double> slopes, double value_at_zero)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (breakpoints_.size() < 2 || slopes_.size() + 1 != breakpoints_.size())
    throw InvalidWitnessError("witness needs n+1 breakpoints for n slopes");
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
    throw InvalidWitnessError("witness breakpoints must span [0,1]");
  values_.assign(1, value_at_zero);
  for (std::size_t s = 0; s < slopes_.size(); ++s) {
    if (!(std::fabs(slopes_[s]) <= 1.0 + kSlopeTol)) throw InvalidWitnessError("witness slope outside [-1, 1]");
    if (!(breakpoints_[s + 1] > breakpoints_[s])) throw InvalidWitnessError("witness breakpoints must increase");
    values_.push_back(values_.back() + slopes_[s] * (breakpoints_[s + 1] - breakpoints_[s]));
  }
}

LipschitzWitness LipschitzWitness::constant(double value) { return LipschitzWitness({0.0, 1.0}, {0.0}, value); }

LipschitzWitness LipschitzWitness::linear(double slope, double value_at_zero) {
  return LipschitzWitness({0.0, 1.0}, {slope}, value_at_zero);
}

double LipschitzWitness::operator()(double x) const {
  if (x <= 0.0) return values_.front() + slopes_.front() * x;
  if (x >= 1.0) return values_.back() + slopes_.back() * (x - 1.0);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto s = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[s] + slopes_[s] * (x - breakpoints_[s]);
}

double w1(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  check_masses(mu, nu);
  long double total = 0.0L;
  for_each_segment(mu, nu, [&](double a, double b, double diff) { total += std::fabs(diff) * (b - a); });
  return static_cast<double>(total);
}

double dual_value(const LipschitzWitness& f, const AtomicMeasure& mu, const AtomicMeasure& nu) {
  long double total = 0.0L;
  for (const auto& a : mu.atoms()) total += a.weight * f(a.location);
  for (const auto& a : nu.atoms()) total -= a.weight * f(a.location);
  return static_cast<double>(total);
}

LipschitzWitness optimal_witness(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  check_masses(mu, nu);
  std::vector<double> bps{0.0};
  std::vector<double> slopes;
  for_each_segment(mu, nu, [&](double, double b, double diff) {
    const double s = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    if (!slopes.empty() && slopes.back() == s) {
      bps.back() = b;
    } else {
      slopes.push_back(s);
      bps.push_back(b);
    }
  });
  if (slopes.empty()) return LipschitzWitness::constant(0.0);
  return LipschitzWitness(std::move(bps), std::move(slopes), 0.0);
}

}  // namespace lmm
