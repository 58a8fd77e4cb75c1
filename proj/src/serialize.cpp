#include "lmm/serialize.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lmm/errors.hpp"

namespace lmm {

namespace {

Json interval_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

Json summary_json(const EstimatorSummary& s) {
  Json j;
  j["estimator"] = s.estimator;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["max"] = s.max;
  j["tail_above_mean_plus_eps"] = s.tail_mean;
  j["tail_above_mean_plus_eps_wilson"] = interval_json(s.tail_mean_ci);
  j["tail_above_median_plus_eps"] = s.tail_median;
  j["tail_above_median_plus_eps_wilson"] = interval_json(s.tail_median_ci);
  return j;
}

Json report_json(const ApproxReport& r) {
  Json j;
  j["sup_weighted_error"] = r.sup_weighted_error;
  j["max_coeff_deviation"] = r.max_coeff_deviation;
  j["support_ok"] = r.support_ok;
  j["sup_error"] = r.sup_error;
  j["max_abs_coeff"] = r.max_abs_coeff;
  return j;
}

}  // namespace

Histogram read_histogram(std::istream& in) {
  std::vector<std::int64_t> counts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long c = 0;
    std::string rest;
    if (!(ls >> c) || (ls >> rest)) throw DomainError("bad histogram count on line " + std::to_string(lineno));
    counts.push_back(c);
  }
  return Histogram(std::move(counts));
}

Profile parse_profile(const std::string& text) {
  std::string t = text;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<std::int64_t> phi;
  for (long long x; in >> x;) phi.push_back(x);
  if (!in.eof()) throw DomainError("bad profile '" + text + "'");
  return Profile(std::move(phi));
}

Json to_json(const AtomicMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"location", a.location}, {"weight", a.weight}});
  return atoms;
}

Json to_json(const Profile& phi) {
  Json j = Json::object();
  const auto& m = phi.multiplicities();
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != 0) j[std::to_string(i + 1)] = m[i];
  return j;
}

Json to_json(const EstimateResult& r, int k) {
  Json j;
  j["k"] = k;
  j["solver_status"] = to_string(r.solver_status);
  j["objective"] = r.objective_value;
  j["pivots"] = r.pivots;
  j["degree"] = r.targets.D;
  j["intervals"] = r.targets.intervals();
  j["measure"] = to_json(r.measure);
  // Sorted masses implied by the measure: weight w at x stands for k w symbols.
  Json sorted = Json::array();
  for (const auto& a : r.measure.atoms()) sorted.push_back({{"mass", a.location}, {"symbols", a.weight * k}});
  j["sorted_masses"] = sorted;
  return j;
}

Json to_json(const BenchmarkResult& r) {
  const auto& c = r.config;
  Json j;
  j["config"] = {{"n", c.n},         {"k", c.k},         {"dist", to_string(c.family)},
                 {"trials", c.trials}, {"seed", c.seed},  {"eps", c.eps},
                 {"c1", c.c1},       {"c2", c.c2},       {"grid", c.grid_density},
                 {"poissonized", c.poissonized}};
  j["lmm"] = summary_json(r.lmm);
  j["empirical"] = summary_json(r.empirical);
  j["ratio"] = r.ratio;
  return j;
}

Json to_json(const CompetitiveReport& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["eps"] = r.eps;
  j["profiles"] = r.profile_count;
  j["good_set_size"] = r.good_set_size;
  j["good_set_probability"] = r.good_set_probability;
  j["delta"] = r.delta;
  j["eps_prime"] = r.eps_prime;
  j["failure_probability"] = r.failure_probability;
  j["rounded_failure_probability"] = r.rounded_failure_probability;
  j["bound"] = r.bound;
  j["reference_bounds"] = {{"delta_exp_3_sqrt_n", r.reference_sqrt},
                           {"delta_pow_1_minus_c_exp_cprime_n_pow", r.reference_chain},
                           {"c", r.chain_c},
                           {"c_prime", r.chain_c_prime},
                           {"note", "upper bounds, not predictions"}};
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"profile", to_json(row.profile)},
                    {"probability", row.probability},
                    {"in_good_set", row.in_good_set},
                    {"realizable", row.realizable},
                    {"pml_likelihood", row.pml_likelihood},
                    {"distance", row.distance},
                    {"rounded_distance", row.rounded_distance},
                    {"rounded_good_mass", row.rounded_good_mass}});
  j["rows"] = rows;
  return j;
}

Json to_json(const std::vector<ApproxSweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"n", r.n},
                   {"degree", r.degree},
                   {"intervals", r.intervals},
                   {"glued", report_json(r.glued)},
                   {"naive", report_json(r.naive)},
                   {"error_at_quarter_glued", r.error_at_quarter_glued},
                   {"error_at_quarter_naive", r.error_at_quarter_naive}});
  return arr;
}

Json to_json(const PmlResult& r, const Profile& phi, int k_max) {
  Json j;
  j["profile"] = to_json(phi);
  j["k_max"] = k_max;
  j["p"] = std::vector<double>(r.p.data(), r.p.data() + r.p.size());
  j["likelihood_lower_bound"] = r.likelihood;
  j["grid_likelihood"] = r.grid_likelihood;
  j["grid_resolution"] = r.grid_resolution;
  j["grid_points"] = r.grid_points;
  return j;
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,estimator,error,objective\n";
  out << std::setprecision(17);
  for (const auto& r : records) out << r.trial << ',' << r.estimator << ',' << r.error << ',' << r.objective << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<ApproxSweepRow>& rows) {
  out << "n,degree,intervals,glued_weighted_error,glued_coeff_deviation,glued_support_ok,glued_max_abs_coeff,"
         "naive_weighted_error,naive_coeff_deviation,error_at_quarter_glued,error_at_quarter_naive\n";
  out << std::setprecision(17);
  for (const auto& r : rows)
    out << r.n << ',' << r.degree << ',' << r.intervals << ',' << r.glued.sup_weighted_error << ','
        << r.glued.max_coeff_deviation << ',' << (r.glued.support_ok ? 1 : 0) << ',' << r.glued.max_abs_coeff << ','
        << r.naive.sup_weighted_error << ',' << r.naive.max_coeff_deviation << ',' << r.error_at_quarter_glued << ','
        << r.error_at_quarter_naive << '\n';
}

}  // namespace lmm
