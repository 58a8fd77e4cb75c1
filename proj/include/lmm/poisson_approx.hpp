#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lmm/intervals.hpp"
#include "lmm/wasserstein.hpp"

namespace lmm {

/// P(x) = sum_d coeffs[d] (x - center)^d on interval m.
struct LocalPolynomial {
  int m = 0;
  double center = 0.0;
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double x) const;
};

/// Near-best degree-D approximation on [a, b] by interpolation at Chebyshev
/// nodes, expressed around `center` (default: the midpoint). D = 0 is only
/// allowed for f constant on [a, b].
LocalPolynomial jackson_approx(const LipschitzWitness& f, double a, double b, int D,
                               std::optional<double> center = std::nullopt, int m = 0);

/// Coefficient bound for a degree-`deg` polynomial bounded by A
/// on [a, b]: the a+b != 0 and a+b = 0 cases.
double coefficient_bound(double a, double b, double A, int nu, int deg);

/// Dense block of coefficients b_j for j in [offset, offset + size).
struct CoefficientBlock {
  std::int64_t offset = 0;
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  /// Last index covered (offset - 1 when empty).
  std::int64_t last() const { return offset + static_cast<std::int64_t>(values.size()) - 1; }
  double at(std::int64_t j) const;
};

/// b*_j = sum_d a_d sum_{d'} C(d,d') (-x_m)^{d-d'} (j)_{d'} / rate^{d'}, j in [lo, hi].
CoefficientBlock monomial_to_poisson(const LocalPolynomial& P, double rate, std::int64_t lo, std::int64_t hi);

/// Zeroes b*_j outside rate * I_m'' (and trims the block).
CoefficientBlock truncate_local(const CoefficientBlock& bstar, int m, const IntervalScheme& scheme, double rate);

/// sum_j b_j P(Poi(rate x) = j).
double evaluate_block(const CoefficientBlock& b, double rate, double x);

class PoissonPolynomial {
 public:
  double rate = 0.0;
  CoefficientBlock coeffs;
  /// Local blocks b^{(m)} at rate / 2 and their k-ranges (rate/2) I_m.
  std::vector<CoefficientBlock> blocks;
  std::vector<std::pair<std::int64_t, std::int64_t>> k_ranges;
};

/// b_j = 2^{-j} sum_m sum_{k in n I_m / 2} C(j,k) b^{(m)}_{j-k}. The
/// unbounded last range is cut so that b_j = 0 for j > (1 + delta) n.
/// Throws ConfigError when local_rate != n / 2.
PoissonPolynomial glue(const std::vector<CoefficientBlock>& locals, double n, const IntervalScheme& scheme,
                       double delta, double local_rate);

/// F(x) = sum_j b_j P(Poi(nx) = j).
double evaluate(const PoissonPolynomial& poly, double x);
/// F(x) = sum_m P(Poi(nx/2) in K_m) sum_l b^{(m)}_l P(Poi(nx/2) = l).
double evaluate_blocked(const PoissonPolynomial& poly, double x);

struct ApproxOptions {
  double c1 = 2.0;
  double c2 = 1.0;
  double delta = 0.5;
};

int approx_degree(double n, double c2);

/// Full construction: local Chebyshev fits on I_m', basis change at rate
/// n/2, truncation to I_m'', gluing.
PoissonPolynomial build_poisson_approximation(const LipschitzWitness& f, double n, const ApproxOptions& options = {});

/// b_j = f(j/n) for j <= (1 + delta) n.
PoissonPolynomial naive_poisson_approximation(const LipschitzWitness& f, double n, double delta);

struct ApproxReport {
  /// sup_x |f - F| / sqrt(max(x, 1/n) / (n log n)).
  double sup_weighted_error = 0.0;
  /// max_{j <= n} |b_j - f(j/n)| n^{1-eps} / (1 + sqrt j).
  double max_coeff_deviation = 0.0;
  /// b_j = 0 for all j > (1 + delta) n.
  bool support_ok = true;
  double sup_error = 0.0;
  double max_abs_coeff = 0.0;
};

ApproxReport verify_bounds(const PoissonPolynomial& poly, const LipschitzWitness& f, double n, double eps, double delta);

/// sup_t |F_{n+1}(t) - F_n(t)| for F_n the CDF of B(n, 1/2)/n.
double binomial_cdf_step(std::int64_t n);

}  // namespace lmm
