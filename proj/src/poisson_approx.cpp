#include "lmm/poisson_approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lmm/errors.hpp"
#include "lmm/moments.hpp"
#include "lmm/pmf.hpp"

namespace lmm {

double LocalPolynomial::operator()(double x) const {
  long double acc = 0.0L;
  const long double y = static_cast<long double>(x) - center;
  for (int d = degree(); d >= 0; --d) acc = acc * y + coeffs[static_cast<std::size_t>(d)];
  return static_cast<double>(acc);
}

LocalPolynomial jackson_approx(const LipschitzWitness& f, double a, double b, int D, std::optional<double> center,
                               int m) {
  if (!(b > a)) throw DomainError("jackson_approx needs a < b");
  if (D < 0) throw DomainError("negative degree");
  LocalPolynomial P;
  P.m = m;
  P.center = center.value_or(0.5 * (a + b));
  if (D == 0) {
    constexpr int kProbe = 64;
    const double f0 = f(a);
    for (int i = 1; i <= kProbe; ++i)
      if (f(a + (b - a) * i / kProbe) != f0) throw DomainError("degree 0 cannot approximate a non-constant function");
    P.coeffs = {f0};
    return P;
  }
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const long double half = 0.5L * (static_cast<long double>(b) - a);
  const long double mid = 0.5L * (static_cast<long double>(b) + a);
  // Interpolate in the scaled variable y = (x - center) / half.
  MatL V(D + 1, D + 1);
  VecL rhs(D + 1);
  for (int i = 0; i <= D; ++i) {
    const long double s = std::cos((2.0L * i + 1.0L) * 3.14159265358979323846264338327950288L / (2.0L * (D + 1)));
    const long double x = mid + half * s;
    const long double y = (x - P.center) / half;
    long double pw = 1.0L;
    for (int d = 0; d <= D; ++d, pw *= y) V(i, d) = pw;
    rhs[i] = f(static_cast<double>(x));
  }
  const VecL alpha = V.colPivHouseholderQr().solve(rhs);
  P.coeffs.resize(static_cast<std::size_t>(D + 1));
  long double scale = 1.0L;
  for (int d = 0; d <= D; ++d, scale *= half) P.coeffs[static_cast<std::size_t>(d)] = static_cast<double>(alpha[d] / scale);
  return P;
}

double coefficient_bound(double a, double b, double A, int nu, int deg) {
  if (a + b != 0.0) {
    return std::pow(2.0, 3.5 * deg) * A * std::pow(std::fabs((a + b) / 2.0), -nu) *
           (std::pow(std::fabs((b + a) / (b - a)), deg) + 1.0);
  }
  return A * std::pow(b, -nu) * std::pow(std::sqrt(2.0) + 1.0, deg);
}

double CoefficientBlock::at(std::int64_t j) const {
  if (j < offset || j > last()) return 0.0;
  return values[static_cast<std::size_t>(j - offset)];
}

CoefficientBlock monomial_to_poisson(const LocalPolynomial& P, double rate, std::int64_t lo, std::int64_t hi) {
  if (P.degree() > kMaxDegree) throw DomainError("degree above 60");
  CoefficientBlock out;
  lo = std::max<std::int64_t>(lo, 0);
  if (hi < lo) return out;
  out.offset = lo;
  out.values.reserve(static_cast<std::size_t>(hi - lo + 1));
  const double step = 1.0 / rate;
  for (std::int64_t j = lo; j <= hi; ++j) {
    const auto g = shifted_falling_all(P.degree(), P.center, static_cast<double>(j) * step, step);
    long double acc = 0.0L;
    for (int d = 0; d <= P.degree(); ++d) acc += static_cast<long double>(P.coeffs[static_cast<std::size_t>(d)]) * g[static_cast<std::size_t>(d)];
    out.values.push_back(static_cast<double>(acc));
  }
  return out;
}

CoefficientBlock truncate_local(const CoefficientBlock& bstar, int m, const IntervalScheme& scheme, double rate) {
  if (scheme.variant() != SchemeVariant::approximation) throw ConfigError("truncate_local needs the approximation scheme");
  CoefficientBlock out;
  if (bstar.empty()) return out;
  const auto& iv = scheme[m];
  const auto lo = std::max(bstar.offset, static_cast<std::int64_t>(std::ceil(rate * iv.outer_left)));
  const auto hi = std::min(bstar.last(), static_cast<std::int64_t>(std::floor(rate * iv.outer_right)));
  if (hi < lo) return out;
  out.offset = lo;
  out.values.assign(bstar.values.begin() + (lo - bstar.offset), bstar.values.begin() + (hi - bstar.offset + 1));
  return out;
}

double evaluate_block(const CoefficientBlock& b, double rate, double x) {
  if (b.empty()) return 0.0;
  const double lambda = rate * x;
  auto [wlo, whi] = poisson_window(lambda);
  const auto lo = std::max(wlo, b.offset);
  const auto hi = std::min(whi, b.last());
  if (hi < lo) return 0.0;
  const auto pmf = poisson_pmf_range(lambda, lo, hi);
  long double acc = 0.0L;
  for (std::int64_t j = lo; j <= hi; ++j) acc += static_cast<long double>(pmf[static_cast<std::size_t>(j - lo)]) * b.at(j);
  return static_cast<double>(acc);
}

PoissonPolynomial glue(const std::vector<CoefficientBlock>& locals, double n, const IntervalScheme& scheme, double delta,
                       double local_rate) {
  if (std::fabs(local_rate - n / 2.0) > 1e-12 * n) throw ConfigError("local polynomials must be built at rate n/2");
  if (static_cast<int>(locals.size()) != scheme.size()) throw ConfigError("one local block per interval required");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  PoissonPolynomial poly;
  poly.rate = n;
  poly.blocks = locals;
  const auto budget = static_cast<std::int64_t>(std::floor((1.0 + delta) * n));
  std::int64_t J = 0;
  for (int m = 1; m <= scheme.size(); ++m) {
    auto r = scheme.lattice_range(m, n / 2.0);
    const auto& blk = locals[static_cast<std::size_t>(m - 1)];
    if (r.second == kUnbounded) r.second = budget - std::max<std::int64_t>(blk.last(), 0);
    if (r.second < r.first && !blk.empty()) throw ConfigError("support budget (1+delta)n too small for the last interval");
    poly.k_ranges.push_back(r);
    if (!blk.empty()) J = std::max(J, r.second + blk.last());
  }
  poly.coeffs.offset = 0;
  poly.coeffs.values.assign(static_cast<std::size_t>(J + 1), 0.0);
  for (std::int64_t j = 0; j <= J; ++j) {
    const double sd = 0.5 * std::sqrt(static_cast<double>(j));
    const auto wlo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(0.5 * j - 9.0 * sd - 10.0)));
    const auto whi = std::min<std::int64_t>(j, static_cast<std::int64_t>(std::ceil(0.5 * j + 9.0 * sd + 10.0)));
    std::vector<double> pmf;
    long double acc = 0.0L;
    for (int m = 1; m <= scheme.size(); ++m) {
      const auto& blk = locals[static_cast<std::size_t>(m - 1)];
      if (blk.empty()) continue;
      const auto& [klo, khi] = poly.k_ranges[static_cast<std::size_t>(m - 1)];
      const auto lo = std::max({wlo, klo, j - blk.last()});
      const auto hi = std::min({whi, khi, j - blk.offset});
      if (hi < lo) continue;
      if (pmf.empty()) pmf = binomial_pmf_range(j, 0.5, wlo, whi);
      for (std::int64_t k = lo; k <= hi; ++k)
        acc += static_cast<long double>(pmf[static_cast<std::size_t>(k - wlo)]) * blk.at(j - k);
    }
    poly.coeffs.values[static_cast<std::size_t>(j)] = static_cast<double>(acc);
  }
  return poly;
}

double evaluate(const PoissonPolynomial& poly, double x) { return evaluate_block(poly.coeffs, poly.rate, x); }

double evaluate_blocked(const PoissonPolynomial& poly, double x) {
  const double half = poly.rate / 2.0;
  long double acc = 0.0L;
  for (std::size_t m = 0; m < poly.blocks.size(); ++m) {
    const auto& blk = poly.blocks[m];
    if (blk.empty()) continue;
    const double w = poisson_interval_prob(half * x, poly.k_ranges[m].first, poly.k_ranges[m].second);
    if (w == 0.0) continue;
    acc += static_cast<long double>(w) * evaluate_block(blk, half, x);
  }
  return static_cast<double>(acc);
}

int approx_degree(double n, double c2) {
  if (!(c2 > 0.0)) throw DomainError("c2 must be positive");
  return std::clamp(static_cast<int>(std::ceil(c2 * std::log(n))), 1, kMaxDegree);
}

PoissonPolynomial build_poisson_approximation(const LipschitzWitness& f, double n, const ApproxOptions& options) {
  const auto scheme = IntervalScheme::build(n, options.c1, SchemeVariant::approximation);
  const int D = approx_degree(n, options.c2);
  const double rate = n / 2.0;
  std::vector<CoefficientBlock> locals;
  for (int m = 1; m <= scheme.size(); ++m) {
    const auto& iv = scheme[m];
    const auto P = jackson_approx(f, iv.enlarged_left, iv.enlarged_right, D, iv.center, m);
    const auto lo = static_cast<std::int64_t>(std::floor(rate * iv.outer_left)) - 1;
    auto hi = static_cast<std::int64_t>(std::ceil(rate * iv.outer_right)) + 1;
    // Split the (1 + delta) n support budget evenly between the local index
    // and the gluing index of the last interval.
    if (m == scheme.size())
      hi = std::min(hi, static_cast<std::int64_t>(std::floor(rate * (1.0 + options.delta))));
    locals.push_back(truncate_local(monomial_to_poisson(P, rate, lo, hi), m, scheme, rate));
  }
  return glue(locals, n, scheme, options.delta, rate);
}

PoissonPolynomial naive_poisson_approximation(const LipschitzWitness& f, double n, double delta) {
  PoissonPolynomial poly;
  poly.rate = n;
  const auto J = static_cast<std::int64_t>(std::floor((1.0 + delta) * n));
  poly.coeffs.offset = 0;
  for (std::int64_t j = 0; j <= J; ++j) poly.coeffs.values.push_back(f(static_cast<double>(j) / n));
  return poly;
}

ApproxReport verify_bounds(const PoissonPolynomial& poly, const LipschitzWitness& f, double n, double eps, double delta) {
  ApproxReport rep;
  std::vector<double> xs{0.0};
  for (int i = 0; i <= 20; ++i) xs.push_back(std::pow(n, -2.0 + i / 20.0));
  constexpr int kGrid = 4096;
  for (int i = 1; i <= kGrid; ++i) xs.push_back(static_cast<double>(i) / kGrid);
  const double logn = std::log(n);
  for (double x : xs) {
    const double err = std::fabs(f(x) - evaluate(poly, x));
    rep.sup_error = std::max(rep.sup_error, err);
    rep.sup_weighted_error = std::max(rep.sup_weighted_error, err / std::sqrt(std::max(x, 1.0 / n) / (n * logn)));
  }
  const auto jmax = static_cast<std::int64_t>(std::floor(n));
  for (std::int64_t j = 0; j <= jmax; ++j) {
    const double dev = std::fabs(poly.coeffs.at(j) - f(static_cast<double>(j) / n));
    rep.max_coeff_deviation =
        std::max(rep.max_coeff_deviation, dev * std::pow(n, 1.0 - eps) / (1.0 + std::sqrt(static_cast<double>(j))));
  }
  const auto budget = static_cast<std::int64_t>(std::floor((1.0 + delta) * n));
  for (std::int64_t j = poly.coeffs.offset; j <= poly.coeffs.last(); ++j) {
    rep.max_abs_coeff = std::max(rep.max_abs_coeff, std::fabs(poly.coeffs.at(j)));
    if (j > budget && poly.coeffs.at(j) != 0.0) rep.support_ok = false;
  }
  return rep;
}

double binomial_cdf_step(std::int64_t n) {
  if (n < 1) throw DomainError("binomial_cdf_step needs n >= 1");
  auto cdf = [](std::int64_t size) {
    const auto pmf = binomial_pmf_range(size, 0.5, 0, size);
    std::vector<double> c(pmf.size());
    double s = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) c[i] = (s += pmf[i]);
    return c;
  };
  const auto Fn = cdf(n), Fn1 = cdf(n + 1);
  double worst = 0.0;
  // Both CDFs are constant between consecutive breakpoints i/n and i/(n+1).
  for (std::int64_t i = 0; i <= n; ++i) {
    const auto k1 = (n + 1) * i / n;
    worst = std::max(worst, std::fabs(Fn1[static_cast<std::size_t>(k1)] - Fn[static_cast<std::size_t>(i)]));
  }
  for (std::int64_t i = 0; i <= n + 1; ++i) {
    const auto k = std::min(n, n * i / (n + 1));
    worst = std::max(worst, std::fabs(Fn1[static_cast<std::size_t>(i)] - Fn[static_cast<std::size_t>(k)]));
  }
  return worst;
}

}  // namespace lmm
