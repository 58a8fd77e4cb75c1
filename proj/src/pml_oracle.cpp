#include "lmm/pml_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "lmm/errors.hpp"
#include "lmm/pmf.hpp"
#include "lmm/rng.hpp"
#include "lmm/wasserstein.hpp"

namespace lmm {

namespace {

constexpr double kRelTol = 1e-12;
constexpr double kLogTol = 1e-9;

double log_chi_m(double l1, double l2, int m) {
  if (l1 == 0.0 && l2 == 0.0) return 0.0;
  if (l2 == 0.0) return std::numeric_limits<double>::infinity();
  const double rho = l1 / l2;
  return l2 * (std::pow(rho, m) - m * (rho - 1.0) - 1.0);
}

void check_m(int m) {
  if (m < 2) throw DomainError("chi^m divergence needs m >= 2");
}

}  // namespace

QuantGrid QuantGrid::build(std::int64_t n, double A, double r) {
  if (n < 1) throw DomainError("quantization grid needs n >= 1");
  if (!(A >= 2.0)) throw DomainError("quantization grid needs A >= 2");
  if (!(r > 0.0 && r <= 0.5)) throw DomainError("quantization grid needs r in (0, 1/2]");
  QuantGrid g;
  g.n = n;
  g.A = A;
  g.r = r;
  const double nn = static_cast<double>(n);
  const double c1 = 0.5 * std::pow(nn, -A);
  const double log_ratio = std::log1p(std::pow(nn, -r));
  g.levels.push_back(0.0);
  for (std::int64_t i = 0;; ++i) {
    const double c = c1 * std::exp(static_cast<double>(i) * log_ratio);
    if (c > 1.0) break;
    g.levels.push_back(c);
  }
  return g;
}

Vector quantize_to_grid(const Vector& p, const QuantGrid& grid) {
  Vector q(p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double x = p[j];
    if (x == 0.0) {
      q[j] = 0.0;
      continue;
    }
    if (!(x >= grid.min_level())) throw DomainError("mass below the smallest grid level");
    const auto it = std::upper_bound(grid.levels.begin(), grid.levels.end(), x);
    q[j] = *(it - 1);
  }
  return q;
}

double chi_m_poisson(double lambda1, double lambda2, int m) {
  check_m(m);
  if (lambda1 < 0.0 || lambda2 < 0.0) throw DomainError("Poisson rates must be >= 0");
  return std::exp(log_chi_m(lambda1, lambda2, m));
}

double chi_m_bound(double lambda1, double lambda2, int m) {
  check_m(m);
  if (!(lambda2 > 0.0)) throw DomainError("chi^m bound needs lambda2 > 0");
  const double delta = std::fabs(lambda1 / lambda2 - 1.0);
  return std::exp(lambda2 * m * m * delta * delta);
}

double chi_m_poisson_brute(double lambda1, double lambda2, int m) {
  check_m(m);
  if (lambda1 < 0.0 || lambda2 < 0.0) throw DomainError("Poisson rates must be >= 0");
  if (lambda2 == 0.0) return lambda1 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  if (lambda1 == 0.0) return std::exp((m - 1) * lambda2);
  // The summand is proportional to Poi(l1^m / l2^(m-1)); sum over its window.
  const double tilted = std::exp(m * std::log(lambda1) - (m - 1) * std::log(lambda2));
  const auto [lo, hi] = poisson_window(tilted);
  long double total = 0.0L;
  for (std::int64_t t = lo; t <= hi; ++t)
    total += std::exp(static_cast<long double>(m) * poisson_log_pmf(lambda1, t) -
                      static_cast<long double>(m - 1) * poisson_log_pmf(lambda2, t));
  return static_cast<double>(total);
}

bool is_close(const Vector& p, const Vector& pp, double alpha, double beta) {
  if (p.size() != pp.size()) throw DomainError("is_close needs equal support sizes");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) {
      if (pp[i] != 0.0) return false;
    } else if (p[i] <= alpha) {
      if (pp[i] > alpha) return false;
    } else {
      if (pp[i] > p[i] * (1.0 + kRelTol) || pp[i] < p[i] / (1.0 + beta) * (1.0 - kRelTol)) return false;
    }
  }
  return true;
}

RoundingResult min_prob_round(const DiscreteDistribution& p, const Profile& phi, double A) {
  if (!(A >= 2.0)) throw DomainError("min_prob_round needs A >= 2");
  const double n = static_cast<double>(phi.sample_size());
  const double floor_mass = 0.5 * std::pow(n, -A);
  const double alpha = std::pow(n, -A);
  const double beta = 3.0 * std::pow(n, -A / 2.0);
  const Vector& x = p.masses();

  std::vector<Eigen::Index> small;
  double medium = 0.0, big = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && x[i] < floor_mass) small.push_back(i);
    else if (x[i] > alpha) big += x[i];
    else medium += x[i];
  }
  if (small.empty()) return {p, false, 1.0};
  if (small.size() > 16) throw ResourceError("min_prob_round: too many sub-threshold masses");

  const double base = profile_probability(p, phi);
  auto attempt = [&](std::uint32_t raise_mask) -> std::optional<RoundingResult> {
    Vector y = x;
    double raised = 0.0;
    for (std::size_t s = 0; s < small.size(); ++s) {
      const bool up = (raise_mask >> s) & 1U;
      y[small[s]] = up ? floor_mass : 0.0;
      raised += y[small[s]];
    }
    if (!(big > 0.0)) return std::nullopt;
    const double factor = (1.0 - raised - medium) / big;
    if (!(factor > 0.0)) return std::nullopt;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      if (x[i] > alpha) y[i] = x[i] * factor;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      if (y[i] > 0.0 && y[i] < floor_mass * (1.0 - kRelTol)) return std::nullopt;
    if (!is_close(x, y, alpha, beta)) return std::nullopt;
    DiscreteDistribution candidate(y);
    const double lik = profile_probability(candidate, phi);
    if (lik < std::exp(-6.0) * base * (1.0 - kRelTol)) return std::nullopt;
    return RoundingResult{std::move(candidate), false, base > 0.0 ? lik / base : 1.0};
  };

  const std::uint32_t all = (1U << small.size()) - 1U;
  if (auto r = attempt(all)) return *r;

  std::optional<RoundingResult> best;
  for (std::uint32_t mask = 0; mask < all; ++mask) {
    auto r = attempt(mask);
    if (r && (!best || r->likelihood_ratio > best->likelihood_ratio)) best = std::move(r);
  }
  // Wider search: every kept mass moves within its is_close band, by a common
  // scale found by bisection (needed when few or no masses exceed n^-A).
  auto widened = [&](std::uint32_t raise_mask) -> std::optional<RoundingResult> {
    Vector seed = x, lo = Vector::Zero(x.size()), hi = Vector::Zero(x.size());
    for (std::size_t s = 0; s < small.size(); ++s) seed[small[s]] = ((raise_mask >> s) & 1U) ? floor_mass : 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (seed[i] == 0.0) continue;
      if (x[i] > alpha) {
        lo[i] = x[i] / (1.0 + beta);
        hi[i] = x[i];
      } else {
        lo[i] = floor_mass;
        hi[i] = alpha;
      }
    }
    if (lo.sum() > 1.0 || hi.sum() < 1.0) return std::nullopt;
    auto at = [&](double t) { return (seed * t).cwiseMax(lo).cwiseMin(hi).eval(); };
    double a = 0.0, b = 1.0;
    while (at(b).sum() < 1.0) b *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      (at(mid).sum() < 1.0 ? a : b) = mid;
    }
    Vector y = at(b);
    y /= y.sum();
    if (!is_close(x, y, alpha, beta)) return std::nullopt;
    DiscreteDistribution candidate(y);
    const double lik = profile_probability(candidate, phi);
    if (lik < std::exp(-6.0) * base * (1.0 - kRelTol)) return std::nullopt;
    return RoundingResult{std::move(candidate), true, base > 0.0 ? lik / base : 1.0};
  };
  if (!best)
    for (std::uint32_t mask = 0; mask <= all; ++mask) {
      auto r = widened(mask);
      if (r && (!best || r->likelihood_ratio > best->likelihood_ratio)) best = std::move(r);
    }
  if (!best) throw ConstructionError("min_prob_round: no candidate passed verification");
  best->used_fallback = true;
  return *best;
}

PmlResult brute_force_pml(const Profile& phi, int k_max, int grid_resolution, int ascent_steps) {
  if (phi.sample_size() > 8) throw ResourceError("brute_force_pml: n above cap of 8");
  if (k_max < 1 || k_max > 5) throw ResourceError("brute_force_pml: k_max must be in [1, 5]");
  if (grid_resolution < 1) throw DomainError("grid resolution must be positive");
  if (phi.distinct() > k_max) throw DomainError("profile has more distinct symbols than k_max");

  const ProfileLikelihood lik(phi, k_max);
  const double R = grid_resolution;
  PmlResult out;
  out.grid_resolution = grid_resolution;
  Vector best(k_max), cur(k_max);
  double best_val = -1.0;

  // Non-increasing integer parts summing to grid_resolution.
  std::vector<int> parts(static_cast<std::size_t>(k_max), 0);
  auto rec = [&](auto&& self, int pos, int remaining, int cap) -> void {
    if (pos == k_max - 1) {
      if (remaining > cap) return;
      parts[static_cast<std::size_t>(pos)] = remaining;
      for (int i = 0; i < k_max; ++i) cur[i] = parts[static_cast<std::size_t>(i)] / R;
      ++out.grid_points;
      const double v = lik(cur);
      if (v > best_val) {
        best_val = v;
        best = cur;
      }
      return;
    }
    const int lo = (remaining + (k_max - pos) - 1) / (k_max - pos);
    for (int a = std::min(cap, remaining); a >= lo; --a) {
      parts[static_cast<std::size_t>(pos)] = a;
      self(self, pos + 1, remaining - a, a);
    }
  };
  rec(rec, 0, grid_resolution, grid_resolution);
  out.grid_likelihood = best_val;

  // Pairwise golden-section ascent; a move is kept only if it improves.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k_max; ++i)
    for (int j = i + 1; j < k_max; ++j) pairs.emplace_back(i, j);
  for (int step = 0; step < ascent_steps && !pairs.empty(); ++step) {
    const auto [i, j] = pairs[static_cast<std::size_t>(step) % pairs.size()];
    const double total = best[i] + best[j];
    if (total <= 0.0) continue;
    Vector trial = best;
    auto value = [&](double a) {
      trial[i] = a;
      trial[j] = total - a;
      return lik(trial);
    };
    double a = 0.0, b = total;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = value(c), fd = value(d);
    for (int it = 0; it < 60; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = value(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = value(d);
      }
    }
    const double x = 0.5 * (a + b);
    const double fx = value(x);
    if (fx > best_val) {
      best_val = fx;
      best = trial;
    }
  }

  std::sort(best.data(), best.data() + best.size(), std::greater<>());
  out.p = best;
  out.likelihood = lik(best);
  return out;
}

LossFunction sorted_l1_loss() {
  LossFunction L;
  L.name = "sorted_l1";
  L.loss = [](const AtomicMeasure& a, const DiscreteDistribution& p) {
    return static_cast<double>(p.support_size()) * w1(a, measure_of(p));
  };
  L.distance = [](const DiscreteDistribution& p, const DiscreteDistribution& q) { return sorted_l1(p, q); };
  L.compatible = true;
  return L;
}

ProfileEstimator empirical_profile_estimator(Eigen::Index k) {
  return [k](const Profile& phi) {
    const auto counts = phi.counts_descending();
    const double n = static_cast<double>(phi.sample_size());
    const auto d = static_cast<Eigen::Index>(counts.size());
    std::vector<Atom> atoms;
    if (d <= k) {
      const double w = 1.0 / static_cast<double>(k);
      for (auto c : counts) atoms.push_back({static_cast<double>(c) / n, w});
      if (k > d) atoms.push_back({0.0, static_cast<double>(k - d) * w});
    } else {
      const double w = 1.0 / static_cast<double>(d);
      for (auto c : counts) atoms.push_back({static_cast<double>(c) / n, w});
    }
    return AtomicMeasure(std::move(atoms));
  };
}

GoodSet good_set(const ProfileEstimator& estimator, const DiscreteDistribution& p, std::int64_t n, double eps,
                 const LossFunction& loss) {
  if (n > 10) throw ResourceError("good_set: n above cap of 10");
  GoodSet G;
  long double total = 0.0L;
  for (const auto& phi : enumerate_profiles(n)) {
    if (loss.loss(estimator(phi), p) <= eps) {
      const double pr = profile_probability(p, phi);
      G.profiles.push_back(phi);
      G.probabilities.push_back(pr);
      total += pr;
    }
  }
  G.probability = static_cast<double>(total);
  return G;
}

bool check_goodset_lemma(const DiscreteDistribution& q, const DiscreteDistribution& p, const GoodSet& G, double eps,
                         double delta, const ProfileEstimator& estimator, const LossFunction& loss) {
  if (!loss.compatible) throw ContractError("loss is not declared compatible with its distance");
  if (q.support_size() != p.support_size()) throw DomainError("p and q need the same support size");
  const double d = loss.distance(p, q);
  long double qG = 0.0L;
  for (const auto& phi : G.profiles) {
    const auto a = estimator(phi);
    if (d > loss.loss(a, p) + loss.loss(a, q) + 1e-12)
      throw ContractError("loss violates d(p,q) <= L(a,p) + L(a,q) on this instance");
    qG += profile_probability(q, phi);
  }
  if (static_cast<double>(qG) <= delta || G.profiles.empty()) return true;
  // The implication only covers q on which the estimator is itself (eps, delta)-accurate.
  long double q_fail = 0.0L;
  for (const auto& phi : enumerate_profiles(G.profiles.front().sample_size()))
    if (loss.loss(estimator(phi), q) > eps) q_fail += profile_probability(q, phi);
  if (static_cast<double>(q_fail) > delta) return true;
  return d <= 2.0 * eps + 1e-12;
}

ChainParams chain_params(Rational c) {
  if (!(c > Rational(0) && c < Rational(1, 12))) throw DomainError("chain_params needs 0 < c < 1/12");
  ChainParams P;
  P.c = c;
  std::int64_t K = 0;
  for (int M = 1; M <= 40; ++M) {
    K = 12 * (3 * (std::int64_t{1} << (M - 1)) - 1);
    if (Rational(1, K) < c) {
      P.M = M;
      break;
    }
  }
  if (P.M == 0) throw DomainError("c too small for exact chain parameters");
  const int M = P.M;
  P.r.assign(static_cast<std::size_t>(M) + 1, Rational(0));
  P.s.assign(static_cast<std::size_t>(M) + 2, Rational(0));
  P.r[0] = Rational(1, 2);
  for (int m = 1; m <= M; ++m) {
    const Rational pow2(std::int64_t{1} << m);
    P.r[static_cast<std::size_t>(m)] =
        Rational(1, 3) * (Rational(1) + Rational(1) / (2 * pow2)) - Rational(2, K) * (Rational(1) - Rational(1) / pow2);
    P.s[static_cast<std::size_t>(m)] =
        Rational(1) / (3 * pow2) - Rational(1, K) * (Rational(3) - Rational(4) / pow2);
  }
  P.t = Rational(1, 3) + Rational(1, K);
  return P;
}

bool chain_params_valid(const ChainParams& P) {
  const int M = P.M;
  if (M < 1 || P.r.size() != static_cast<std::size_t>(M) + 1 || P.s.size() != static_cast<std::size_t>(M) + 2)
    return false;
  if (P.r[0] != Rational(1, 2) || P.s[static_cast<std::size_t>(M) + 1] != Rational(0)) return false;
  for (int m = 1; m <= M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    if (Rational(1) - 2 * P.r[um] + P.s[um] != P.t) return false;
    if (P.r[um - 1] - P.s[um] != P.t) return false;
    if (!(P.r[um] > Rational(1, 3)) || !(P.s[um] > Rational(0))) return false;
    if (m == 1 && !(P.r[1] < Rational(5, 12) && P.s[1] < Rational(1, 6))) return false;
    if (m > 1 && !(P.r[um] < P.r[um - 1] && P.s[um] < P.s[um - 1])) return false;
  }
  const std::int64_t K = 12 * (3 * (std::int64_t{1} << (M - 1)) - 1);
  if (!(Rational(1, K) < P.c)) return false;
  if (M > 1) {
    const std::int64_t Kprev = 12 * (3 * (std::int64_t{1} << (M - 2)) - 1);
    if (Rational(1, Kprev) < P.c) return false;
  }
  return P.t == Rational(1, 3) + Rational(1, K) && P.t < Rational(1, 3) + P.c;
}

double poissonized_profile_probability(const Vector& q, const Profile& phi) {
  const double Q = q.sum();
  if (!(Q > 0.0)) return 0.0;
  const double n = static_cast<double>(phi.sample_size());
  return profile_probability(DiscreteDistribution(q / Q), phi) * poisson_pmf(n * Q, phi.sample_size());
}

CoveringReport check_covering(const DiscreteDistribution& p, const QuantGrid& grid, int m, std::size_t sampled_subsets,
                              std::uint64_t seed) {
  check_m(m);
  if (grid.n > 8) throw ResourceError("check_covering: n above cap of 8");
  CoveringReport R;
  R.m = m;
  R.n = grid.n;
  const double n = static_cast<double>(grid.n);
  const Vector q = quantize_to_grid(p.masses(), grid);
  const double Q = q.sum();
  const DiscreteDistribution qbar(q / Q);

  double log_chi_pq = 0.0, log_chi_qp = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    log_chi_pq += log_chi_m(n * p[j], n * q[j], m);
    log_chi_qp += log_chi_m(n * q[j], n * p[j], m);
  }
  R.chi_pq = std::exp(log_chi_pq);
  R.chi_qp = std::exp(log_chi_qp);
  const double log_pi1 = poisson_log_pmf(n, grid.n);
  const double log_piQ = poisson_log_pmf(n * Q, grid.n);
  const double e = static_cast<double>(m) / (m - 1);
  R.exponent = e;
  R.c_pq = log_chi_qp / (m - 1) + log_pi1 - e * log_piQ;
  R.c_qp = log_chi_pq / (m - 1) + log_piQ - e * log_pi1;
  R.c_pq_empirical = -std::numeric_limits<double>::infinity();
  R.c_qp_empirical = -std::numeric_limits<double>::infinity();

  const auto profiles = enumerate_profiles(grid.n);
  const std::size_t F = profiles.size();
  std::vector<double> Pp(F), Pq(F);
  for (std::size_t i = 0; i < F; ++i) {
    Pp[i] = profile_probability(p, profiles[i]);
    Pq[i] = profile_probability(qbar, profiles[i]);
  }

  auto check = [&](double sp, double sq) {
    ++R.subsets_checked;
    if (sp == 0.0 && sq == 0.0) return;
    if (sp == 0.0 || sq == 0.0) {
      ++R.violations;
      return;
    }
    const double lp = std::log(sp), lq = std::log(sq);
    R.c_pq_empirical = std::max(R.c_pq_empirical, e * lq - lp);
    R.c_qp_empirical = std::max(R.c_qp_empirical, e * lp - lq);
    if (lp < e * lq - R.c_pq - kLogTol) ++R.violations;
    if (lq < e * lp - R.c_qp - kLogTol) ++R.violations;
    const double lph = lp + log_pi1, lqh = lq + log_piQ;
    if (log_chi_pq < m * lph - (m - 1) * lqh - kLogTol) ++R.data_processing_violations;
    if (log_chi_qp < m * lqh - (m - 1) * lph - kLogTol) ++R.data_processing_violations;
  };

  if (grid.n <= 6) {
    const std::uint64_t count = std::uint64_t{1} << F;
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      long double sp = 0.0L, sq = 0.0L;
      for (std::size_t i = 0; i < F; ++i)
        if ((mask >> i) & 1U) {
          sp += Pp[i];
          sq += Pq[i];
        }
      check(static_cast<double>(sp), static_cast<double>(sq));
    }
  } else {
    CounterRng rng(seed, 0xc0);
    for (std::size_t t = 0; t < sampled_subsets; ++t) {
      long double sp = 0.0L, sq = 0.0L;
      bool any = false;
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < F; ++i) {
        if (i % 64 == 0) bits = rng();
        if ((bits >> (i % 64)) & 1U) {
          sp += Pp[i];
          sq += Pq[i];
          any = true;
        }
      }
      if (any) check(static_cast<double>(sp), static_cast<double>(sq));
    }
  }
  return R;
}

}  // namespace lmm
