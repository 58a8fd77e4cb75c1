#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lmm/core_model.hpp"
#include "lmm/intervals.hpp"
#include "lmm/poisson_approx.hpp"
#include "lmm/rng.hpp"
#include "lmm/wasserstein.hpp"

namespace lmm {

enum class Family { uniform, zipf, two_level, point_mass, custom };

Family parse_family(const std::string& name);
const char* to_string(Family f);

struct ExperimentConfig {
  std::int64_t n = 10000;
  std::int64_t k = 5000;
  Family family = Family::uniform;
  double zipf_s = 1.0;
  std::string custom_file;
  int trials = 20;
  std::uint64_t seed = 1;
  double eps = 0.05;
  double delta = 0.5;
  double c1 = kDefaultC1;
  double c2 = 0.5;
  double A = 2.0;
  /// 0 selects the adaptive LP grid.
  int grid_density = 0;
  bool poissonized = true;
  /// 0 uses std::thread::hardware_concurrency().
  int threads = 0;
};

/// Throws DomainError for trials < 1 or eps <= 0 and ResourceError past the
/// desk-scale caps (n <= 1e6, trials <= 1e3).
void validate(const ExperimentConfig& config);

/// uniform; zipf p_i ~ i^-s; two_level: the first ceil(k/2) symbols carry
/// three times the mass of the rest; point_mass; custom: masses read from a
/// newline-separated file and normalized.
DiscreteDistribution make_distribution(const ExperimentConfig& config);

/// Poi(lambda): inversion below 30, PTRS transformed rejection above.
std::int64_t sample_poisson(double lambda, CounterRng& rng);

/// Multinomial(n, p) counts from n alias-table draws.
Histogram sample_iid(const DiscreteDistribution& p, std::int64_t n, std::uint64_t seed, std::uint64_t stream = 0);
/// Independent h_j ~ Poi(n p_j).
Histogram sample_poissonized(const DiscreteDistribution& p, std::int64_t n, std::uint64_t seed,
                             std::uint64_t stream = 0);

/// mu of h / n padded to k symbols; delta_0 when n = 0.
AtomicMeasure empirical_measure(const Histogram& h, std::int64_t k);

struct TrialRecord {
  int trial = 0;
  std::string estimator;
  /// Sorted l1 error, k W1(estimate, mu_p).
  double error = 0.0;
  double objective = 0.0;
  double wall_time = 0.0;
};

struct Interval {
  double lo = 0.0, hi = 1.0;
};

/// Wilson score interval at z = 1.96.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.96);

struct EstimatorSummary {
  std::string estimator;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
  /// Frequency of error >= mean + eps, with its Wilson interval.
  double tail_mean = 0.0;
  Interval tail_mean_ci;
  /// Frequency of error >= median + eps.
  double tail_median = 0.0;
  Interval tail_median_ci;
};

struct BenchmarkResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  EstimatorSummary lmm, empirical;
  /// mean(LMM) / mean(empirical).
  double ratio = 0.0;
};

BenchmarkResult run_benchmark(const ExperimentConfig& config);

struct CompetitiveRow {
  Profile profile;
  double probability = 0.0;
  bool in_good_set = false;
  bool realizable = true;
  double pml_likelihood = 0.0;
  /// d(p_phi, p) and d(p'_phi, p).
  double distance = 0.0;
  double rounded_distance = 0.0;
  /// P(p'_phi, G).
  double rounded_good_mass = 0.0;
};

struct CompetitiveReport {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double eps = 0.0;
  std::size_t profile_count = 0;
  std::size_t good_set_size = 0;
  double good_set_probability = 0.0;
  /// delta: P(p, Phi_n \ G) maximized with P(q, {L(T(phi), q) > eps}) over
  /// the rounded PML distributions q, so the good-set implication applies to them.
  double delta = 0.0;
  /// max_phi d(p_phi, p'_phi).
  double eps_prime = 0.0;
  /// P(p, {phi : d(p_phi, p) > 2 eps + eps'}).
  double failure_probability = 0.0;
  /// P(p, {phi : d(p'_phi, p) > 2 eps}).
  double rounded_failure_probability = 0.0;
  /// delta + sum_{phi in G} P(p, phi) 1(P(p'_phi, G) <= delta).
  double bound = 0.0;
  /// Reference curves (upper bounds, not predictions).
  double reference_sqrt = 0.0;
  double reference_chain = 0.0;
  double chain_c = 1.0 / 24.0;
  double chain_c_prime = 1.0;
  std::vector<CompetitiveRow> rows;
};

/// n <= 8 and k <= 5. The reference estimator is the sorted empirical one.
CompetitiveReport run_competitive_check(const ExperimentConfig& config);
CompetitiveReport run_competitive_check(const ExperimentConfig& config, const DiscreteDistribution& p);

struct ApproxSweepRow {
  double n = 0.0;
  int degree = 0;
  int intervals = 0;
  ApproxReport glued;
  ApproxReport naive;
  double error_at_quarter_glued = 0.0;
  double error_at_quarter_naive = 0.0;
};

/// "abs:c" is |x - c|, "tent:c" rises with slope 1 up to c and falls
/// after, "linear" is x, "zero" is 0.
LipschitzWitness parse_witness(const std::string& spec);

/// n <= 2^16.
std::vector<ApproxSweepRow> run_approx_sweep(const LipschitzWitness& f, const std::vector<double>& ns, double eps,
                                             double delta, const ApproxOptions& options = {});

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Command-line entry point: estimate, benchmark, competitive, approx, pml.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmm
