#include "lmm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lmm/errors.hpp"
#include "lmm/pmf.hpp"

namespace lmm {

namespace {

using Quad = __float128;

struct Neumaier {
  Quad sum = 0, comp = 0;
  void add(Quad v) {
    const Quad t = sum + v;
    const Quad av = v < 0 ? -v : v;
    const Quad as = sum < 0 ? -sum : sum;
    if (as >= av) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  Quad value() const { return sum + comp; }
};

// C(d, d') table up to kMaxDegree in quad precision.
const std::vector<std::vector<Quad>>& binomials() {
  static const auto table = [] {
    std::vector<std::vector<Quad>> t(kMaxDegree + 1);
    for (int d = 0; d <= kMaxDegree; ++d) {
      t[d].assign(d + 1, 1);
      for (int j = 1; j < d; ++j) t[d][j] = t[d - 1][j - 1] + t[d - 1][j];
    }
    return t;
  }();
  return table;
}

void check_degree(int D) {
  if (D < 0 || D > kMaxDegree) throw DomainError("moment degree outside [0, 60]");
}

double range_weight(double lambda, const std::pair<std::int64_t, std::int64_t>& r) {
  return poisson_interval_prob(lambda, r.first, r.second);
}

}  // namespace

std::vector<double> shifted_falling_all(int D, double center, double x, double step) {
  check_degree(D);
  const auto& C = binomials();
  std::vector<Quad> falling(D + 1), neg_pow(D + 1);
  falling[0] = 1;
  neg_pow[0] = 1;
  for (int i = 1; i <= D; ++i) {
    falling[i] = falling[i - 1] * (Quad(x) - Quad(i - 1) * Quad(step));
    neg_pow[i] = neg_pow[i - 1] * (-Quad(center));
  }
  std::vector<double> out(D + 1);
  for (int d = 0; d <= D; ++d) {
    Neumaier acc;
    for (int j = 0; j <= d; ++j) acc.add(C[d][j] * neg_pow[d - j] * falling[j]);
    out[d] = static_cast<double>(acc.value());
  }
  return out;
}

double g_eval(int d, double x_m, double x, double n) { return shifted_falling_all(d, x_m, x, 2.0 / n)[d]; }

double g_tilde_eval(int d, int m, double x, const IntervalScheme& scheme) {
  const auto& iv = scheme[m];
  return g_eval(d, iv.center, std::clamp(x, iv.outer_left, iv.outer_right), scheme.n());
}

double smoothed_moment_true(const DiscreteDistribution& p, int m, int d, const IntervalScheme& scheme) {
  check_degree(d);
  const double half = scheme.n() / 2.0;
  const auto range = scheme.lattice_range(m, half);
  const double xm = scheme[m].center;
  double total = 0.0;
  for (Eigen::Index j = 0; j < p.support_size(); ++j) {
    const double w = range_weight(half * p[j], range);
    if (w != 0.0) total += std::pow(p[j] - xm, d) * w;
  }
  return total;
}

std::vector<double> count_moment_contribution(std::int64_t count, int m, int D, const IntervalScheme& scheme,
                                              bool clamp) {
  check_degree(D);
  std::vector<double> out(D + 1, 0.0);
  const double half = scheme.n() / 2.0;
  const auto [lo, hi] = scheme.lattice_range(m, half);
  // Binomial(count, 1/2) window; mass outside is below ~1e-13.
  const double sd = 0.5 * std::sqrt(static_cast<double>(count));
  const auto wlo = static_cast<std::int64_t>(std::floor(0.5 * static_cast<double>(count) - 8.0 * sd - 8.0));
  const auto whi = static_cast<std::int64_t>(std::ceil(0.5 * static_cast<double>(count) + 8.0 * sd + 8.0));
  const std::int64_t s0 = std::max({lo, wlo, std::int64_t{0}});
  const std::int64_t s1 = std::min({hi, whi, count});
  const auto& iv = scheme[m];
  const double step = 2.0 / scheme.n();
  std::vector<Neumaier> acc(D + 1);
  for (std::int64_t s = s0; s <= s1; ++s) {
    const double w = binomial_pmf(count, 0.5, s);
    if (w == 0.0) continue;
    double z = static_cast<double>(count - s) / half;
    if (clamp) z = std::clamp(z, iv.outer_left, iv.outer_right);
    const auto g = shifted_falling_all(D, iv.center, z, step);
    for (int d = 0; d <= D; ++d) acc[d].add(Quad(w) * Quad(g[d]));
  }
  for (int d = 0; d <= D; ++d) out[d] = static_cast<double>(acc[d].value());
  return out;
}

double smoothed_moment_estimate(const Histogram& h, int m, int d, const IntervalScheme& scheme, bool clamp) {
  std::map<std::int64_t, std::int64_t> distinct;
  for (auto c : h.counts) ++distinct[c];
  double total = 0.0;
  for (const auto& [c, mult] : distinct)
    total += static_cast<double>(mult) * count_moment_contribution(c, m, d, scheme, clamp)[d];
  return total;
}

double effective_support(const DiscreteDistribution& p, int m, const IntervalScheme& scheme) {
  return smoothed_moment_true(p, m, 0, scheme);
}

int degree_from_c2(double n, double c2) {
  if (!(c2 > 0.0)) throw DomainError("c2 must be positive");
  return std::clamp(static_cast<int>(std::lround(c2 * std::log(n))), 1, kMaxDegree);
}

MomentTable estimate_moment_table(const Histogram& h, const IntervalScheme& scheme, int D, bool clamp) {
  check_degree(D);
  MomentTable t;
  t.D = D;
  t.values = Eigen::MatrixXd::Zero(scheme.size(), D + 1);
  std::map<std::int64_t, std::int64_t> distinct;
  for (auto c : h.counts) ++distinct[c];
  for (int m = 1; m <= scheme.size(); ++m) {
    for (const auto& [c, mult] : distinct) {
      const auto contrib = count_moment_contribution(c, m, D, scheme, clamp);
      for (int d = 0; d <= D; ++d) t.values(m - 1, d) += static_cast<double>(mult) * contrib[d];
    }
  }
  return t;
}

MomentTable true_moment_table(const DiscreteDistribution& p, const IntervalScheme& scheme, int D) {
  check_degree(D);
  MomentTable t;
  t.D = D;
  t.values = Eigen::MatrixXd::Zero(scheme.size(), D + 1);
  for (int m = 1; m <= scheme.size(); ++m)
    for (int d = 0; d <= D; ++d) t.values(m - 1, d) = smoothed_moment_true(p, m, d, scheme);
  t.truth = t.values;
  return t;
}

}  // namespace lmm
