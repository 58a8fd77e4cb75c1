#include "lmm/pmf.hpp"

#include <algorithm>
#include <cmath>

#include "lmm/errors.hpp"

namespace lmm {

namespace {

constexpr double kRelStop = 1e-18;

void check_rate(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("poisson rate must be finite and >= 0");
}

// Sum pmf(j) for j = from, from+step, ... within [lo, hi] until terms become
// negligible relative to the running sum. Terms must be decreasing away from
// `from` (true for tails that start beyond the mode).
template <class Pmf>
double tail_sum(Pmf pmf, std::int64_t from, std::int64_t lo, std::int64_t hi, int step) {
  long double sum = 0.0L;
  for (std::int64_t j = from; j >= lo && j <= hi; j += step) {
    const double t = pmf(j);
    sum += t;
    if (t == 0.0 || t < kRelStop * static_cast<double>(sum)) break;
    if (step > 0 && j == hi) break;
  }
  return static_cast<double>(sum);
}


constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// Error of Stirling's formula, log(n!) - log(sqrt(2 pi n) (n/e)^n) (Loader 2000).
double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  if (n <= 15.0) return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLnSqrt2Pi;
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x/np) + np - x, evaluated without cancellation.
double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -INFINITY;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double poisson_log_pmf(double lambda, std::int64_t j) {
  check_rate(lambda);
  if (j < 0) throw DomainError("poisson outcome must be >= 0");
  if (lambda == 0.0) return j == 0 ? 0.0 : -INFINITY;
  if (j == 0) return -lambda;
  const double x = static_cast<double>(j);
  return -stirlerr(x) - bd0(x, lambda) - 0.5 * std::log(2.0 * M_PI * x);
}

double poisson_pmf(double lambda, std::int64_t j) { return std::exp(poisson_log_pmf(lambda, j)); }

double binomial_log_pmf(std::int64_t n, double q, std::int64_t j) {
  if (n < 0 || j < 0) throw DomainError("binomial arguments must be >= 0");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("binomial probability outside [0,1]");
  if (j > n) return -INFINITY;
  if (q == 0.0) return j == 0 ? 0.0 : -INFINITY;
  if (q == 1.0) return j == n ? 0.0 : -INFINITY;
  const double nn = static_cast<double>(n), x = static_cast<double>(j), p = 1.0 - q;
  if (j == 0) return nn * std::log1p(-q);
  if (j == n) return nn * std::log(q);
  return stirlerr(nn) - stirlerr(x) - stirlerr(nn - x) - bd0(x, nn * q) - bd0(nn - x, nn * p) +
         0.5 * std::log(nn / (2.0 * M_PI * x * (nn - x)));
}

double binomial_pmf(std::int64_t n, double q, std::int64_t j) { return std::exp(binomial_log_pmf(n, q, j)); }

double poisson_interval_prob(double lambda, std::int64_t lo, std::int64_t hi) {
  check_rate(lambda);
  lo = std::max<std::int64_t>(lo, 0);
  if (hi < lo) return 0.0;
  if (lambda == 0.0) return lo == 0 ? 1.0 : 0.0;
  auto pmf = [lambda](std::int64_t j) { return poisson_pmf(lambda, j); };
  const auto mode = static_cast<std::int64_t>(std::floor(lambda));
  if (hi <= mode) return tail_sum(pmf, hi, lo, hi, -1);
  if (lo > mode) return tail_sum(pmf, lo, lo, hi, +1);
  // Interval straddles the mode: complement of the two tails.
  const double left = lo > 0 ? tail_sum(pmf, lo - 1, 0, lo - 1, -1) : 0.0;
  const double right = hi < kUnbounded ? tail_sum(pmf, hi + 1, hi + 1, kUnbounded, +1) : 0.0;
  return std::clamp(1.0 - left - right, 0.0, 1.0);
}

double binomial_interval_prob(std::int64_t n, double q, std::int64_t lo, std::int64_t hi) {
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min(hi, n);
  if (hi < lo) return 0.0;
  auto pmf = [n, q](std::int64_t j) { return binomial_pmf(n, q, j); };
  const auto mode = static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * q));
  if (hi <= mode) return tail_sum(pmf, hi, lo, hi, -1);
  if (lo > mode) return tail_sum(pmf, lo, lo, hi, +1);
  const double left = lo > 0 ? tail_sum(pmf, lo - 1, 0, lo - 1, -1) : 0.0;
  const double right = hi < n ? tail_sum(pmf, hi + 1, hi + 1, n, +1) : 0.0;
  return std::clamp(1.0 - left - right, 0.0, 1.0);
}

namespace {

// Fills out[j - lo] for j in [lo, hi] from an anchor value using
// up(j) = pmf(j+1)/pmf(j) and its inverse.
template <class LogPmf, class Ratio>
std::vector<double> pmf_range(std::int64_t lo, std::int64_t hi, std::int64_t mode, LogPmf log_pmf, Ratio up) {
  std::vector<double> out;
  if (hi < lo) return out;
  out.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const std::int64_t anchor = std::clamp(mode, lo, hi);
  double v = std::exp(log_pmf(anchor));
  out[static_cast<std::size_t>(anchor - lo)] = v;
  for (std::int64_t j = anchor; j < hi; ++j) {
    v *= up(j);
    out[static_cast<std::size_t>(j + 1 - lo)] = v;
  }
  v = out[static_cast<std::size_t>(anchor - lo)];
  for (std::int64_t j = anchor; j > lo; --j) {
    v /= up(j - 1);
    out[static_cast<std::size_t>(j - 1 - lo)] = v;
  }
  return out;
}

}  // namespace

std::vector<double> poisson_pmf_range(double lambda, std::int64_t lo, std::int64_t hi) {
  check_rate(lambda);
  lo = std::max<std::int64_t>(lo, 0);
  if (lambda == 0.0) {
    std::vector<double> out(hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0, 0.0);
    if (lo == 0 && !out.empty()) out[0] = 1.0;
    return out;
  }
  const auto mode = static_cast<std::int64_t>(std::floor(lambda));
  return pmf_range(
      lo, hi, mode, [lambda](std::int64_t j) { return poisson_log_pmf(lambda, j); },
      [lambda](std::int64_t j) { return lambda / static_cast<double>(j + 1); });
}

std::vector<double> binomial_pmf_range(std::int64_t n, double q, std::int64_t lo, std::int64_t hi) {
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min(hi, n);
  if (q == 0.0 || q == 1.0) {
    std::vector<double> out(hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0, 0.0);
    for (std::int64_t j = lo; j <= hi; ++j) out[static_cast<std::size_t>(j - lo)] = binomial_pmf(n, q, j);
    return out;
  }
  const auto mode = static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * q));
  const double odds = q / (1.0 - q);
  return pmf_range(
      lo, hi, std::min(mode, n), [n, q](std::int64_t j) { return binomial_log_pmf(n, q, j); },
      [n, odds](std::int64_t j) { return odds * static_cast<double>(n - j) / static_cast<double>(j + 1); });
}

std::pair<std::int64_t, std::int64_t> poisson_window(double lambda) {
  check_rate(lambda);
  const double spread = 10.0 * std::sqrt(lambda) + 12.0;
  const auto lo = static_cast<std::int64_t>(std::max(0.0, std::floor(lambda - spread)));
  const auto hi = static_cast<std::int64_t>(std::ceil(lambda + spread));
  return {lo, hi};
}

PoissonTailBounds poisson_tail(double lambda, double delta) {
  check_rate(lambda);
  if (!(delta > 0.0)) throw DomainError("poisson_tail requires delta > 0");
  return {std::exp(-std::min(delta * delta, delta) * lambda / 3.0), std::exp(-delta * delta * lambda / 2.0)};
}

}  // namespace lmm
