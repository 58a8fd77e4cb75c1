#include "lmm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "lmm/errors.hpp"
#include "lmm/estimator.hpp"
#include "lmm/pml_oracle.hpp"

namespace lmm {

namespace {

constexpr std::int64_t kMaxN = 1000000;
constexpr int kMaxTrials = 1000;

// Vose alias table.
class AliasTable {
 public:
  explicit AliasTable(const Vector& p) : prob_(static_cast<std::size_t>(p.size())), alias_(prob_.size()) {
    const auto k = prob_.size();
    std::vector<double> scaled(k);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < k; ++i) {
      scaled[i] = p[static_cast<Eigen::Index>(i)] * static_cast<double>(k);
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back(), l = large.back();
      small.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
  }

  std::size_t draw(CounterRng& rng) const {
    const auto i = static_cast<std::size_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

EstimatorSummary summarize(const std::string& name, std::vector<double> errors, double eps) {
  EstimatorSummary s;
  s.estimator = name;
  const auto T = static_cast<std::int64_t>(errors.size());
  if (T == 0) return s;
  long double total = 0.0L;
  for (double e : errors) total += e;
  s.mean = static_cast<double>(total / T);
  std::sort(errors.begin(), errors.end());
  s.max = errors.back();
  const auto mid = static_cast<std::size_t>(T / 2);
  s.median = T % 2 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
  std::int64_t above_mean = 0, above_median = 0;
  for (double e : errors) {
    above_mean += e >= s.mean + eps;
    above_median += e >= s.median + eps;
  }
  s.tail_mean = static_cast<double>(above_mean) / static_cast<double>(T);
  s.tail_mean_ci = wilson_interval(above_mean, T);
  s.tail_median = static_cast<double>(above_median) / static_cast<double>(T);
  s.tail_median_ci = wilson_interval(above_median, T);
  return s;
}

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "uniform") return Family::uniform;
  if (name == "zipf") return Family::zipf;
  if (name == "two-level" || name == "two_level") return Family::two_level;
  if (name == "point-mass" || name == "point_mass") return Family::point_mass;
  if (name == "custom") return Family::custom;
  throw DomainError("unknown distribution family '" + name + "'");
}

const char* to_string(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::zipf: return "zipf";
    case Family::two_level: return "two-level";
    case Family::point_mass: return "point-mass";
    case Family::custom: return "custom";
  }
  return "?";
}

void validate(const ExperimentConfig& c) {
  if (c.n < 1 || c.k < 1) throw DomainError("n and k must be positive");
  if (c.trials < 1) throw DomainError("trials must be >= 1");
  if (!(c.eps > 0.0)) throw DomainError("eps must be positive");
  if (c.n > kMaxN) throw ResourceError("n above the cap of 1e6");
  if (c.trials > kMaxTrials) throw ResourceError("trials above the cap of 1000");
}

DiscreteDistribution make_distribution(const ExperimentConfig& c) {
  const auto k = static_cast<Eigen::Index>(c.k);
  switch (c.family) {
    case Family::uniform: return DiscreteDistribution::uniform(k);
    case Family::point_mass: return DiscreteDistribution::point_mass(k);
    case Family::zipf: {
      Vector w(k);
      for (Eigen::Index i = 0; i < k; ++i) w[i] = std::pow(static_cast<double>(i + 1), -c.zipf_s);
      return DiscreteDistribution(w / w.sum());
    }
    case Family::two_level: {
      Vector w = Vector::Ones(k);
      w.head((k + 1) / 2).array() = 3.0;
      return DiscreteDistribution(w / w.sum());
    }
    case Family::custom: {
      std::ifstream in(c.custom_file);
      if (!in) throw DomainError("cannot read distribution file '" + c.custom_file + "'");
      std::vector<double> xs;
      for (double x; in >> x;) xs.push_back(x);
      if (xs.empty()) throw DomainError("distribution file is empty");
      Vector w = Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
      if ((w.array() < 0.0).any() || !(w.sum() > 0.0)) throw DomainError("distribution file has invalid masses");
      return DiscreteDistribution(w / w.sum());
    }
  }
  throw DomainError("unknown distribution family");
}

std::int64_t sample_poisson(double lambda, CounterRng& rng) {
  if (!(lambda >= 0.0)) throw DomainError("Poisson rate must be >= 0");
  if (lambda == 0.0) return 0;
  if (lambda < 30.0) {
    double p = std::exp(-lambda), F = p;
    const double u = rng.uniform();
    std::int64_t k = 0;
    while (u > F && k < 1000) {
      ++k;
      p *= lambda / static_cast<double>(k);
      F += p;
    }
    return k;
  }
  // Hormann's PTRS.
  const double slam = std::sqrt(lambda), loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double U = rng.uniform() - 0.5;
    const double V = rng.uniform_open();
    const double us = 0.5 - std::fabs(U);
    const double kd = std::floor((2.0 * a / us + b) * U + lambda + 0.43);
    if (us >= 0.07 && V <= vr) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -lambda + kd * loglam - std::lgamma(kd + 1.0))
      return static_cast<std::int64_t>(kd);
  }
}

Histogram sample_iid(const DiscreteDistribution& p, std::int64_t n, std::uint64_t seed, std::uint64_t stream) {
  if (n < 0) throw DomainError("sample size must be >= 0");
  const AliasTable table(p.masses());
  CounterRng rng(seed, stream);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(p.support_size()), 0);
  for (std::int64_t t = 0; t < n; ++t) ++counts[table.draw(rng)];
  return Histogram(std::move(counts));
}

Histogram sample_poissonized(const DiscreteDistribution& p, std::int64_t n, std::uint64_t seed, std::uint64_t stream) {
  if (n < 0) throw DomainError("sample size must be >= 0");
  CounterRng rng(seed, stream);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(p.support_size()), 0);
  const double nn = static_cast<double>(n);
  for (Eigen::Index j = 0; j < p.support_size(); ++j)
    counts[static_cast<std::size_t>(j)] = sample_poisson(nn * p[j], rng);
  return Histogram(std::move(counts));
}

AtomicMeasure empirical_measure(const Histogram& h, std::int64_t k) {
  if (h.sample_size == 0) return dirac(0.0);
  if (static_cast<std::int64_t>(h.counts.size()) > k) throw DomainError("histogram has more symbols than k");
  const double n = static_cast<double>(h.sample_size);
  const double w = 1.0 / static_cast<double>(k);
  std::vector<Atom> atoms;
  atoms.reserve(h.counts.size() + 1);
  for (auto c : h.counts) atoms.push_back({static_cast<double>(c) / n, w});
  const auto missing = k - static_cast<std::int64_t>(h.counts.size());
  if (missing > 0) atoms.push_back({0.0, static_cast<double>(missing) * w});
  return AtomicMeasure(std::move(atoms));
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double T = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / T;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2.0 * T)) / (1.0 + z2 / T);
  const double half = z * std::sqrt(ph * (1.0 - ph) / T + z2 / (4.0 * T * T)) / (1.0 + z2 / T);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

BenchmarkResult run_benchmark(const ExperimentConfig& config) {
  validate(config);
  BenchmarkResult out;
  out.config = config;
  const auto p = make_distribution(config);
  const auto mu_p = measure_of(p);
  const auto scheme = IntervalScheme::build(static_cast<double>(config.n), config.c1);
  EstimatorOptions opts;
  opts.c2 = config.c2;
  opts.grid_density = config.grid_density;
  const double k = static_cast<double>(config.k);

  const auto T = static_cast<std::size_t>(config.trials);
  out.records.resize(2 * T);
  parallel_for(T, config.threads, [&](std::size_t t) {
    const auto h = config.poissonized ? sample_poissonized(p, config.n, config.seed, t)
                                      : sample_iid(p, config.n, config.seed, t);
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = estimate_sorted_distribution(h, static_cast<int>(config.k), scheme, opts);
    const auto t1 = std::chrono::steady_clock::now();
    const auto emp = empirical_measure(h, config.k);
    const auto t2 = std::chrono::steady_clock::now();
    auto& a = out.records[2 * t];
    a = {static_cast<int>(t), "lmm", k * w1(est.measure, mu_p), est.objective_value,
         std::chrono::duration<double>(t1 - t0).count()};
    auto& b = out.records[2 * t + 1];
    b = {static_cast<int>(t), "empirical", k * w1(emp, mu_p), 0.0,
         std::chrono::duration<double>(t2 - t1).count()};
  });

  std::vector<double> el, ee;
  for (const auto& r : out.records) (r.estimator == "lmm" ? el : ee).push_back(r.error);
  out.lmm = summarize("lmm", el, config.eps);
  out.empirical = summarize("empirical", ee, config.eps);
  out.ratio = out.empirical.mean > 0.0 ? out.lmm.mean / out.empirical.mean : 0.0;
  return out;
}

CompetitiveReport run_competitive_check(const ExperimentConfig& config) {
  return run_competitive_check(config, make_distribution(config));
}

CompetitiveReport run_competitive_check(const ExperimentConfig& config, const DiscreteDistribution& p) {
  if (config.n > 8) throw ResourceError("competitive check: n above cap of 8");
  if (p.support_size() > 5) throw ResourceError("competitive check: k above cap of 5");
  if (!(config.eps > 0.0)) throw DomainError("eps must be positive");
  const std::int64_t n = config.n;
  const auto K = p.support_size();
  CompetitiveReport R;
  R.n = n;
  R.k = K;
  R.eps = config.eps;

  const auto estimator = empirical_profile_estimator(K);
  const auto loss = sorted_l1_loss();
  const auto profiles = enumerate_profiles(n);
  R.profile_count = profiles.size();
  const auto G = good_set(estimator, p, n, config.eps, loss);
  R.good_set_size = G.profiles.size();
  R.good_set_probability = G.probability;

  std::vector<double> losses(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) losses[i] = loss.loss(estimator(profiles[i]), p);

  std::vector<DiscreteDistribution> pml, rounded;
  long double outside = 0.0L;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& phi = profiles[i];
    CompetitiveRow row{phi};
    row.probability = profile_probability(p, phi);
    row.in_good_set = losses[i] <= config.eps;
    if (!row.in_good_set) outside += row.probability;
    row.realizable = phi.distinct() <= K;
    if (row.realizable) {
      const auto res = brute_force_pml(phi, static_cast<int>(K));
      pml.emplace_back(res.p / res.p.sum());
      row.pml_likelihood = res.likelihood;
      rounded.push_back(min_prob_round(pml.back(), phi, config.A).p);
    } else {
      // p cannot emit this profile; any placeholder carries zero weight.
      pml.push_back(DiscreteDistribution::uniform(K));
      rounded.push_back(pml.back());
    }
    row.distance = sorted_l1(pml.back(), p);
    row.rounded_distance = sorted_l1(rounded.back(), p);
    R.eps_prime = std::max(R.eps_prime, sorted_l1(pml.back(), rounded.back()));
    R.rows.push_back(std::move(row));
  }

  double delta = static_cast<double>(outside);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    auto& row = R.rows[i];
    if (!row.in_good_set || !(row.probability > 0.0)) continue;
    const auto& q = rounded[i];
    long double bad = 0.0L, good = 0.0L;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
      const double pr = profile_probability(q, profiles[j]);
      if (loss.loss(estimator(profiles[j]), q) > config.eps) bad += pr;
      if (R.rows[j].in_good_set) good += pr;
    }
    row.rounded_good_mass = static_cast<double>(good);
    delta = std::max(delta, static_cast<double>(bad));
  }
  R.delta = delta;

  long double fail = 0.0L, fail_rounded = 0.0L, tail = 0.0L;
  for (const auto& row : R.rows) {
    if (row.distance > 2.0 * config.eps + R.eps_prime) fail += row.probability;
    if (row.rounded_distance > 2.0 * config.eps) fail_rounded += row.probability;
    if (row.in_good_set && row.rounded_good_mass <= delta) tail += row.probability;
  }
  R.failure_probability = static_cast<double>(fail);
  R.rounded_failure_probability = static_cast<double>(fail_rounded);
  R.bound = delta + static_cast<double>(tail);
  const double nn = static_cast<double>(n);
  R.reference_sqrt = delta * std::exp(3.0 * std::sqrt(nn));
  R.reference_chain =
      std::pow(delta, 1.0 - R.chain_c) * std::exp(R.chain_c_prime * std::pow(nn, 1.0 / 3.0 + R.chain_c));
  return R;
}

LipschitzWitness parse_witness(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  double c = 0.5;
  if (colon != std::string::npos) {
    try {
      c = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw DomainError("bad witness parameter in '" + spec + "'");
    }
  }
  if (kind == "linear") return LipschitzWitness::linear(1.0, 0.0);
  if (kind == "zero") return LipschitzWitness::constant(0.0);
  if (!(c > 0.0 && c < 1.0)) throw DomainError("witness parameter must lie in (0, 1)");
  if (kind == "abs") return LipschitzWitness({0.0, c, 1.0}, {-1.0, 1.0}, c);
  if (kind == "tent") return LipschitzWitness({0.0, c, 1.0}, {1.0, -1.0}, 0.0);
  throw DomainError("unknown witness '" + spec + "'");
}

std::vector<ApproxSweepRow> run_approx_sweep(const LipschitzWitness& f, const std::vector<double>& ns, double eps,
                                             double delta, const ApproxOptions& options) {
  std::vector<ApproxSweepRow> rows;
  ApproxOptions opts = options;
  opts.delta = delta;
  for (double n : ns) {
    if (n > 65536.0) throw ResourceError("approximation sweep: n above cap of 2^16");
    ApproxSweepRow row;
    row.n = n;
    row.degree = approx_degree(n, opts.c2);
    row.intervals = IntervalScheme::build(n, opts.c1, SchemeVariant::approximation).size();
    const auto glued = build_poisson_approximation(f, n, opts);
    const auto naive = naive_poisson_approximation(f, n, delta);
    row.glued = verify_bounds(glued, f, n, eps, delta);
    row.naive = verify_bounds(naive, f, n, eps, delta);
    row.error_at_quarter_glued = std::fabs(f(0.25) - evaluate(glued, 0.25));
    row.error_at_quarter_naive = std::fabs(f(0.25) - evaluate(naive, 0.25));
    rows.push_back(row);
  }
  return rows;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_index = count;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lmm
