#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace lmm {

inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

/// log(n!) through lgamma.
double log_factorial(std::int64_t n);
double log_binomial_coefficient(std::int64_t n, std::int64_t k);

double poisson_log_pmf(double lambda, std::int64_t j);
double poisson_pmf(double lambda, std::int64_t j);

double binomial_log_pmf(std::int64_t n, double q, std::int64_t j);
double binomial_pmf(std::int64_t n, double q, std::int64_t j);

/// Poi(lambda) pmf on the integers lo..hi, by ratio recurrence outwards from
/// the mode (or the nearest range end). Relative accuracy about 1e-13.
std::vector<double> poisson_pmf_range(double lambda, std::int64_t lo, std::int64_t hi);

/// B(n, q) pmf on lo..hi, same scheme.
std::vector<double> binomial_pmf_range(std::int64_t n, double q, std::int64_t lo, std::int64_t hi);

/// P(lo <= X <= hi) for X ~ Poi(lambda). hi may be kUnbounded. Tails are
/// summed term by term from the boundary outwards, so probabilities far in
/// the tail keep their relative accuracy (needed for n^-5 style checks).
double poisson_interval_prob(double lambda, std::int64_t lo, std::int64_t hi);

/// Same for X ~ B(n, q).
double binomial_interval_prob(std::int64_t n, double q, std::int64_t lo, std::int64_t hi);

/// Integer window [lo, hi] outside of which Poi(lambda) has mass below
/// roughly 1e-13.
std::pair<std::int64_t, std::int64_t> poisson_window(double lambda);

/// Chernoff bounds for X ~ Poi(lambda):
///   P(X >= (1+delta) lambda) <= exp(-min(delta^2, delta) lambda / 3)
///   P(X <= (1-delta) lambda) <= exp(-delta^2 lambda / 2)
struct PoissonTailBounds {
  double upper;
  double lower;
};
PoissonTailBounds poisson_tail(double lambda, double delta);

}  // namespace lmm
