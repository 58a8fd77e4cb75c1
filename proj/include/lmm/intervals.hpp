#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace lmm {

/// Smallest integer c1 for which both localization tails stay below n^-5
/// at n = 1e3 and n = 1e4.
inline constexpr double kDefaultC1 = 42.0;

enum class SchemeVariant { estimator, approximation };

/// Geometry of one local interval. With u = c1 log n / n and index range
/// (a, b] (a = m-1, b = m except for the merged last interval):
///   core       I_m           = (u a^2, u b^2]       (I_1 includes 0)
///   enlarged   Ĩ_m or I_m'   = [u (a-1/4)_+^2, u (b+1/4)^2]   estimator
///                              [u (a-1/3)_+^2, u (b+1/3)^2]   approximation
///   outer      [x_L, x_R] or I_m'' = offsets 1/2 or 1 respectively
struct LocalInterval {
  int m;
  double core_left, core_right;
  double enlarged_left, enlarged_right;
  double outer_left, outer_right;
  double center;
  /// ℓ̃_m = enlarged_right - enlarged_left.
  double enlarged_length() const { return enlarged_right - enlarged_left; }
};

class IntervalScheme {
 public:
  /// n >= 16, c1 >= 1 for the estimator. Throws ConfigError when the
  /// scheme degenerates (c1 log n > n).
  static IntervalScheme build(double n, double c1, SchemeVariant variant = SchemeVariant::estimator);

  double n() const { return n_; }
  double c1() const { return c1_; }
  SchemeVariant variant() const { return variant_; }
  /// u = c1 log n / n.
  double unit() const { return unit_; }
  int size() const { return static_cast<int>(intervals_.size()); }
  /// 1-based access, m in [1, M].
  const LocalInterval& operator[](int m) const { return intervals_.at(static_cast<std::size_t>(m - 1)); }
  const std::vector<LocalInterval>& intervals() const { return intervals_; }

  /// Index m with x in I_m; x = 0 maps to 1. Throws RangeError outside [0,1].
  int locate(double x) const;

  /// Integers s with s / scale in I_m, scale > 0. The last interval is
  /// unbounded above on the lattice so that the ranges partition all of N.
  std::pair<std::int64_t, std::int64_t> lattice_range(int m, double scale) const;

 private:
  double n_ = 0, c1_ = 0, unit_ = 0;
  SchemeVariant variant_ = SchemeVariant::estimator;
  std::vector<LocalInterval> intervals_;
};

struct LocalizationTails {
  /// P(h not in n Ĩ_m), h ~ Poi(np); set when p in I_m.
  std::optional<double> tail_out;
  /// P(h in n I_m), h ~ Poi(np); set when p not in Ĩ_m.
  std::optional<double> tail_in;
};

LocalizationTails localization_check(const IntervalScheme& scheme, double p, int m);

/// Largest of both localization tails over all m and boundary-adjacent p
/// (plus a grid inside each interval).
double worst_localization_tail(const IntervalScheme& scheme);

}  // namespace lmm
