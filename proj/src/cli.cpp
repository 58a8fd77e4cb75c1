#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lmm/errors.hpp"
#include "lmm/estimator.hpp"
#include "lmm/harness.hpp"
#include "lmm/serialize.hpp"

namespace lmm {

namespace {

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct CommonFlags {
  ExperimentConfig config;
  std::string dist = "uniform";
  std::string out;
  bool iid = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  auto& c = f.config;
  app->add_option("--n", c.n, "Sample size (Poisson rate)");
  app->add_option("--k", c.k, "Support size");
  app->add_option("--dist", f.dist, "uniform | zipf | two-level | point-mass | custom");
  app->add_option("--dist-file", c.custom_file, "Masses for --dist custom, one per line");
  app->add_option("--zipf-s", c.zipf_s, "Zipf exponent");
  app->add_option("--trials", c.trials, "Number of trials");
  app->add_option("--seed", c.seed, "RNG seed");
  app->add_option("--c1", c.c1, "Interval width constant");
  app->add_option("--c2", c.c2, "Moment degree constant");
  app->add_option("--eps", c.eps, "Accuracy target");
  app->add_option("--delta", c.delta, "Tail / support parameter");
  app->add_option("--A", c.A, "Minimum-mass exponent for rounding");
  app->add_option("--grid", c.grid_density, "LP atoms per interval (0 = adaptive)");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app->add_flag("--iid", f.iid, "Fixed sample size instead of Poissonized sampling");
  app->add_option("--out", f.out, "Output file or prefix");
}

void finalize(CommonFlags& f) {
  f.config.family = parse_family(f.dist);
  f.config.poissonized = !f.iid;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local moment matching estimator and PML oracle tools"};
  app.require_subcommand(1);

  CommonFlags est_f, bench_f, comp_f, approx_f, pml_f;
  bench_f.config.trials = 20;
  comp_f.config.n = 6;
  comp_f.config.k = 3;
  comp_f.config.eps = 0.5;

  auto* est = app.add_subcommand("estimate", "Histogram file -> estimated sorted distribution (JSON)");
  add_common(est, est_f);
  std::string input;
  est->add_option("--input", input, "Histogram file, one count per line")->required();

  auto* bench = app.add_subcommand("benchmark", "LMM vs empirical over random trials (CSV + JSON)");
  add_common(bench, bench_f);

  auto* comp = app.add_subcommand("competitive", "Exact PML plug-in failure probability at tiny n (JSON)");
  add_common(comp, comp_f);

  auto* approx = app.add_subcommand("approx", "Poisson polynomial approximation sweep (CSV + JSON)");
  add_common(approx, approx_f);
  std::string witness = "abs:0.5";
  std::vector<double> ns{1024, 4096, 16384};
  ApproxOptions aopts;
  approx->add_option("--f", witness, "abs:c | tent:c | linear | zero");
  approx->add_option("--ns", ns, "Sample sizes")->delimiter(',');
  approx->add_option("--approx-c1", aopts.c1, "Interval constant for the approximation");
  approx->add_option("--approx-c2", aopts.c2, "Degree constant for the approximation");

  auto* pml = app.add_subcommand("pml", "Brute-force PML for a profile (JSON)");
  add_common(pml, pml_f);
  std::string profile_text;
  int k_max = 5, resolution = 60;
  pml->add_option("--profile", profile_text, "phi_1,...,phi_n")->required();
  pml->add_option("--kmax", k_max, "Largest support size");
  pml->add_option("--resolution", resolution, "Simplex grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*est) {
      finalize(est_f);
      std::ifstream in(input);
      if (!in) throw DomainError("cannot read '" + input + "'");
      const auto h = read_histogram(in);
      const int k = std::max<int>(static_cast<int>(h.counts.size()), est->count("--k") ? static_cast<int>(est_f.config.k) : 0);
      const double n = est->count("--n") ? static_cast<double>(est_f.config.n) : static_cast<double>(h.sample_size);
      const auto scheme = IntervalScheme::build(n, est_f.config.c1);
      EstimatorOptions opts;
      opts.c2 = est_f.config.c2;
      opts.grid_density = est_f.config.grid_density;
      write_text(est_f.out, dump(to_json(estimate_sorted_distribution(h, k, scheme, opts), k)), out);
    } else if (*bench) {
      finalize(bench_f);
      const auto res = run_benchmark(bench_f.config);
      std::ostringstream csv;
      write_records_csv(csv, res.records);
      if (bench_f.out.empty()) {
        out << dump(to_json(res));
      } else {
        write_text(bench_f.out + ".csv", csv.str(), out);
        write_text(bench_f.out + ".json", dump(to_json(res)), out);
      }
    } else if (*comp) {
      finalize(comp_f);
      write_text(comp_f.out, dump(to_json(run_competitive_check(comp_f.config))), out);
    } else if (*approx) {
      finalize(approx_f);
      const auto rows = run_approx_sweep(parse_witness(witness), ns, approx_f.config.eps, approx_f.config.delta, aopts);
      std::ostringstream csv;
      write_sweep_csv(csv, rows);
      if (approx_f.out.empty()) {
        out << dump(to_json(rows));
      } else {
        write_text(approx_f.out + ".csv", csv.str(), out);
        write_text(approx_f.out + ".json", dump(to_json(rows)), out);
      }
    } else if (*pml) {
      finalize(pml_f);
      const auto phi = parse_profile(profile_text);
      write_text(pml_f.out, dump(to_json(brute_force_pml(phi, k_max, resolution), phi, k_max)), out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace lmm
