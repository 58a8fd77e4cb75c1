#include "lmm/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "lmm/errors.hpp"
#include "lmm/pmf.hpp"

namespace lmm {

namespace {

constexpr double kSupportTol = 1e-12;
constexpr double kFeasibilityTol = 1e-7;

double grid_right(const LocalInterval& iv) { return std::min(iv.enlarged_right, 1.0); }

std::vector<double> interval_locations(const LocalInterval& iv, int G, const std::vector<double>& extra) {
  std::vector<double> xs;
  const double a = iv.enlarged_left, b = grid_right(iv);
  if (G == 1) {
    xs.push_back(a);
  } else {
    for (int g = 0; g < G; ++g) xs.push_back(g == G - 1 ? b : a + (b - a) * g / (G - 1));
  }
  for (double x : extra) {
    if (x < a - kSupportTol || x > b + kSupportTol) throw ConstraintError("extra grid point outside its interval");
    xs.push_back(std::clamp(x, a, b));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal:
      return "optimal";
    case SolverStatus::iteration_cap:
      return "iteration_cap";
    case SolverStatus::degenerate:
      return "degenerate";
  }
  return "unknown";
}

GridSpec GridSpec::uniform(int M, int G) {
  GridSpec g;
  g.atoms_per_interval.assign(static_cast<std::size_t>(M), G);
  g.extra_points.assign(static_cast<std::size_t>(M), {});
  return g;
}

GridSpec GridSpec::adaptive(const IntervalScheme& scheme, int k, int D, int cap) {
  GridSpec g;
  const int floor_g = std::max(4 * D, 16);
  for (int m = 1; m <= scheme.size(); ++m) {
    const auto& iv = scheme[m];
    const double k_eff = m == 1 ? k : std::min(static_cast<double>(k), 1.0 / iv.core_left);
    const double spacing = 1.0 / (20.0 * k_eff);
    const double len = grid_right(iv) - iv.enlarged_left;
    const double want = std::ceil(len / spacing) + 1.0;
    g.atoms_per_interval.push_back(static_cast<int>(std::clamp(want, static_cast<double>(floor_g), static_cast<double>(cap))));
  }
  g.extra_points.assign(static_cast<std::size_t>(scheme.size()), {});
  return g;
}

LpInstance build_lp(const MomentTable& targets, const IntervalScheme& scheme, int k, int G) {
  if (G < 2 * targets.D) throw DomainError("grid density must be at least 2D");
  return build_lp(targets, scheme, k, GridSpec::uniform(scheme.size(), G));
}

LpInstance build_lp(const MomentTable& targets, const IntervalScheme& scheme, int k, const GridSpec& grid) {
  const int M = scheme.size();
  const int D = targets.D;
  if (targets.intervals() != M) throw ConfigError("moment table does not match the interval scheme");
  if (k < 1) throw DomainError("support size must be positive");
  if (static_cast<int>(grid.atoms_per_interval.size()) != M) throw ConfigError("grid spec does not match scheme");

  LpInstance lp;
  lp.k = k;
  lp.D = D;
  lp.M = M;
  for (int m = 1; m <= M; ++m) {
    const auto& extra = grid.extra_points.empty() ? std::vector<double>{} : grid.extra_points[static_cast<std::size_t>(m - 1)];
    lp.offsets.push_back(lp.weight_count);
    lp.locations.push_back(interval_locations(scheme[m], grid.atoms_per_interval[static_cast<std::size_t>(m - 1)], extra));
    lp.weight_count += static_cast<Eigen::Index>(lp.locations.back().size());
  }
  const Eigen::Index slack0 = lp.weight_count;
  const Eigen::Index vars = slack0 + static_cast<Eigen::Index>(M) * (D + 1);
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(M) * (D + 1) + 2;
  auto& P = lp.program;
  P.A = Eigen::MatrixXd::Zero(rows, vars);
  P.b = Eigen::VectorXd::Zero(rows);
  P.c = Eigen::VectorXd::Zero(vars);

  Eigen::Index row = 0;
  double tail_target = 0.0;
  // d = 0 rows use suffix sums over m' >= m, so walk m downwards.
  std::vector<double> suffix(static_cast<std::size_t>(M));
  for (int m = M; m >= 1; --m) {
    tail_target += targets(m, 0);
    suffix[static_cast<std::size_t>(m - 1)] = tail_target;
  }
  for (int m = 1; m <= M; ++m) {
    const auto& iv = scheme[m];
    const double len = iv.enlarged_length();
    for (int d = 0; d <= D; ++d) {
      const Eigen::Index t = slack0 + static_cast<Eigen::Index>(m - 1) * (D + 1) + d;
      P.c[t] = len;
      if (d == 0) {
        for (int mm = m; mm <= M; ++mm) {
          const auto off = lp.offsets[static_cast<std::size_t>(mm - 1)];
          const auto cnt = static_cast<Eigen::Index>(lp.locations[static_cast<std::size_t>(mm - 1)].size());
          P.A.row(row).segment(off, cnt).setOnes();
        }
        P.b[row] = suffix[static_cast<std::size_t>(m - 1)];
      } else {
        const auto off = lp.offsets[static_cast<std::size_t>(m - 1)];
        const auto& xs = lp.locations[static_cast<std::size_t>(m - 1)];
        for (std::size_t g = 0; g < xs.size(); ++g)
          P.A(row, off + static_cast<Eigen::Index>(g)) = std::pow((xs[g] - iv.center) / len, d);
        P.b[row] = targets(m, d) / std::pow(len, d);
      }
      P.A.row(row + 1).head(slack0) = -P.A.row(row).head(slack0);
      P.b[row + 1] = -P.b[row];
      P.A(row, t) = -1.0;
      P.A(row + 1, t) = -1.0;
      row += 2;
    }
  }
  // Mass row (scaled by 1/k) and mean row.
  for (int m = 1; m <= M; ++m) {
    const auto off = lp.offsets[static_cast<std::size_t>(m - 1)];
    const auto& xs = lp.locations[static_cast<std::size_t>(m - 1)];
    for (std::size_t g = 0; g < xs.size(); ++g) {
      P.A(row, off + static_cast<Eigen::Index>(g)) = 1.0 / k;
      P.A(row + 1, off + static_cast<Eigen::Index>(g)) = xs[g];
    }
  }
  P.b[row] = 1.0;
  P.b[row + 1] = 1.0;
  return lp;
}

EstimateResult solve_lp(const LpInstance& lp, const SimplexOptions& options) {
  auto sol = lmm::solve_lp(lp.program, options);
  std::int64_t pivots = sol.pivots;
  bool feasible = max_violation(lp.program, sol.x) <= kFeasibilityTol;
  if (sol.status == SimplexStatus::optimal && !feasible) {
    // Roundoff drove the double tableau off the feasible set; redo it in
    // extended precision.
    LinearProgram<long double> wide{lp.program.A.cast<long double>(), lp.program.b.cast<long double>(),
                                    lp.program.c.cast<long double>()};
    const auto ext = lmm::solve_lp(wide, options);
    pivots += ext.pivots;
    sol.x = ext.x.cast<double>();
    sol.objective = static_cast<double>(ext.objective);
    sol.status = ext.status;
    feasible = max_violation(lp.program, sol.x) <= kFeasibilityTol;
  }
  EstimateResult res;
  switch (sol.status) {
    case SimplexStatus::optimal:
      res.solver_status = feasible ? SolverStatus::optimal : SolverStatus::degenerate;
      break;
    case SimplexStatus::iteration_cap:
      res.solver_status = SolverStatus::iteration_cap;
      break;
    default:
      res.solver_status = SolverStatus::degenerate;
  }
  res.pivots = pivots;
  res.objective_value = sol.objective;
  std::vector<Atom> all;
  for (int m = 1; m <= lp.M; ++m) {
    std::vector<Atom> atoms;
    const auto off = lp.offsets[static_cast<std::size_t>(m - 1)];
    const auto& xs = lp.locations[static_cast<std::size_t>(m - 1)];
    for (std::size_t g = 0; g < xs.size(); ++g) {
      const double w = sol.x[off + static_cast<Eigen::Index>(g)] / lp.k;
      if (w > 0.0) atoms.push_back({xs[g], w});
    }
    all.insert(all.end(), atoms.begin(), atoms.end());
    res.components.emplace_back(std::move(atoms));
  }
  res.measure = AtomicMeasure(std::move(all));
  return res;
}

double surrogate_loss(const std::vector<AtomicMeasure>& components, const MomentTable& targets,
                      const IntervalScheme& scheme, int k) {
  const int M = scheme.size();
  if (static_cast<int>(components.size()) != M || targets.intervals() != M)
    throw ConfigError("surrogate_loss: component count does not match the scheme");
  std::vector<double> mass_resid(static_cast<std::size_t>(M));
  for (int m = 1; m <= M; ++m) {
    const auto& iv = scheme[m];
    for (const auto& a : components[static_cast<std::size_t>(m - 1)].atoms())
      if (a.location < iv.enlarged_left - kSupportTol || a.location > iv.enlarged_right + kSupportTol)
        throw ConstraintError("candidate component has support outside its enlarged interval");
    mass_resid[static_cast<std::size_t>(m - 1)] = k * components[static_cast<std::size_t>(m - 1)].total_mass() - targets(m, 0);
  }
  double loss = 0.0;
  for (int m = 1; m <= M; ++m) {
    const auto& iv = scheme[m];
    const double len = iv.enlarged_length();
    const auto& mu = components[static_cast<std::size_t>(m - 1)];
    double inner = 0.0;
    for (int d = 1; d <= targets.D; ++d)
      inner += std::fabs(k * mu.moment(d, iv.center) - targets(m, d)) / std::pow(len, d);
    double tail = 0.0;
    for (int mm = m; mm <= M; ++mm) tail += mass_resid[static_cast<std::size_t>(mm - 1)];
    loss += len * (inner + std::fabs(tail));
  }
  return loss;
}

std::vector<AtomicMeasure> target_components(const DiscreteDistribution& p, const IntervalScheme& scheme) {
  const double half = scheme.n() / 2.0;
  const double inv_k = 1.0 / static_cast<double>(p.support_size());
  std::vector<AtomicMeasure> out;
  for (int m = 1; m <= scheme.size(); ++m) {
    const auto& iv = scheme[m];
    const auto range = scheme.lattice_range(m, half);
    std::vector<Atom> atoms;
    for (Eigen::Index j = 0; j < p.support_size(); ++j) {
      if (p[j] < iv.enlarged_left || p[j] > iv.enlarged_right) continue;
      atoms.push_back({p[j], inv_k * poisson_interval_prob(half * p[j], range.first, range.second)});
    }
    out.emplace_back(std::move(atoms));
  }
  return out;
}

EstimateResult estimate_sorted_distribution(const Histogram& h, int k, const IntervalScheme& scheme,
                                            const EstimatorOptions& options) {
  if (scheme.n() < 16) throw DomainError("estimator needs n >= 16");
  if (static_cast<int>(h.counts.size()) > k) throw DomainError("histogram has more symbols than k");
  Histogram padded = h;
  padded.counts.resize(static_cast<std::size_t>(k), 0);
  const int D = degree_from_c2(scheme.n(), options.c2);
  auto table = estimate_moment_table(padded, scheme, D);
  table.c2 = options.c2;
  const auto grid = options.grid_density > 0 ? GridSpec::uniform(scheme.size(), options.grid_density)
                                             : GridSpec::adaptive(scheme, k, D);
  const auto lp = build_lp(table, scheme, k, grid);
  auto res = solve_lp(lp, options.simplex);
  double mass = res.measure.total_mass();
  if (mass > 1.0) {
    res.measure = res.measure.scaled(1.0 / mass);
    mass = 1.0;
  }
  res.measure = res.measure + dirac(0.0, 1.0 - mass);
  res.targets = std::move(table);
  return res;
}

}  // namespace lmm
