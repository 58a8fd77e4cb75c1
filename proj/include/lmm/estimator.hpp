#pragma once

#include <Eigen/Core>
#include <vector>

#include "lmm/core_model.hpp"
#include "lmm/intervals.hpp"
#include "lmm/moments.hpp"
#include "lmm/simplex.hpp"

namespace lmm {

enum class SolverStatus { optimal, iteration_cap, degenerate };

const char* to_string(SolverStatus s);

/// Candidate atom locations per interval. Uniform grids over Ĩ_m ∩ [0,1]
/// plus optional extra points (which must lie in Ĩ_m).
struct GridSpec {
  std::vector<int> atoms_per_interval;
  std::vector<std::vector<double>> extra_points;

  static GridSpec uniform(int M, int G);
  /// Spacing about 1/(20 k_eff) with k_eff = k on I_1 and min(k, 1/left(I_m))
  /// beyond, clamped to [max(4D, 16), cap].
  static GridSpec adaptive(const IntervalScheme& scheme, int k, int D, int cap = 20000);
};

/// The linear program over weights v = k w on the grid. Variables are
/// ordered [v_{1,*}, ..., v_{M,*}, t_{1,0..D}, ..., t_{M,0..D}].
struct LpInstance {
  LinearProgram<double> program;
  std::vector<std::vector<double>> locations;
  std::vector<Eigen::Index> offsets;
  Eigen::Index weight_count = 0;
  int k = 1;
  int D = 1;
  int M = 1;

  Eigen::Index variable_count() const { return program.A.cols(); }
  Eigen::Index row_count() const { return program.A.rows(); }
};

LpInstance build_lp(const MomentTable& targets, const IntervalScheme& scheme, int k, int G);
LpInstance build_lp(const MomentTable& targets, const IntervalScheme& scheme, int k, const GridSpec& grid);

struct EstimateResult {
  AtomicMeasure measure;
  /// μ̂_m per interval (before the δ_0 completion).
  std::vector<AtomicMeasure> components;
  double objective_value = 0.0;
  SolverStatus solver_status = SolverStatus::optimal;
  std::int64_t pivots = 0;
  MomentTable targets;
};

/// Solves the instance; `measure` is μ̂_0 without the δ_0 completion.
EstimateResult solve_lp(const LpInstance& lp, const SimplexOptions& options = {});

/// L(μ, M̂) for a candidate given per interval (μ_1, ..., μ_M).
double surrogate_loss(const std::vector<AtomicMeasure>& components, const MomentTable& targets,
                      const IntervalScheme& scheme, int k);

/// The target candidate μ_m = (1/k) sum_{p_j in Ĩ_m} P(Poi(np_j/2) in nI_m/2) δ_{p_j}.
std::vector<AtomicMeasure> target_components(const DiscreteDistribution& p, const IntervalScheme& scheme);

struct EstimatorOptions {
  double c2 = 0.5;
  /// 0 selects the adaptive grid.
  int grid_density = 0;
  SimplexOptions simplex;
};

/// End to end: moment table, LP, then μ̂ = μ̂_0 + (1 - μ̂_0(R)) δ_0.
EstimateResult estimate_sorted_distribution(const Histogram& h, int k, const IntervalScheme& scheme,
                                            const EstimatorOptions& options = {});

}  // namespace lmm
