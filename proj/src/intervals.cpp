#include "lmm/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "lmm/errors.hpp"
#include "lmm/pmf.hpp"

namespace lmm {

namespace {
double pos_sq(double v) { return v > 0.0 ? v * v : 0.0; }
}  // namespace

IntervalScheme IntervalScheme::build(double n, double c1, SchemeVariant variant) {
  if (!(n >= 2.0)) throw DomainError("interval scheme needs n >= 2");
  if (!(c1 > 0.0)) throw DomainError("interval scheme needs c1 > 0");
  IntervalScheme s;
  s.n_ = n;
  s.c1_ = c1;
  s.variant_ = variant;
  s.unit_ = c1 * std::log(n) / n;
  if (s.unit_ > 1.0) throw ConfigError("degenerate interval scheme: c1 log n > n");
  // Index range stretched to beta on the last interval so that u beta^2 = 1.
  const double beta = std::sqrt(1.0 / s.unit_);
  const int M = std::max(1, static_cast<int>(std::floor(beta)));
  const double inner = variant == SchemeVariant::estimator ? 0.25 : 1.0 / 3.0;
  const double outer = variant == SchemeVariant::estimator ? 0.5 : 1.0;
  const double u = s.unit_;
  for (int m = 1; m <= M; ++m) {
    const double a = m - 1;
    const double b = m == M ? beta : static_cast<double>(m);
    LocalInterval iv;
    iv.m = m;
    iv.core_left = u * a * a;
    iv.core_right = m == M ? 1.0 : u * b * b;
    iv.enlarged_left = u * pos_sq(a - inner);
    iv.enlarged_right = u * (b + inner) * (b + inner);
    iv.outer_left = u * pos_sq(a - outer);
    iv.outer_right = u * (b + outer) * (b + outer);
    if (variant == SchemeVariant::estimator) {
      iv.center = m == 1 ? 0.0 : 0.5 * (iv.core_left + iv.core_right);
    } else {
      const double mid = 0.5 * (a + b);
      iv.center = u * mid * mid;
    }
    s.intervals_.push_back(iv);
  }
  return s;
}

int IntervalScheme::locate(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw RangeError("locate: point outside [0,1]");
  if (x == 0.0) return 1;
  int m = static_cast<int>(std::ceil(std::sqrt(x / unit_)));
  m = std::clamp(m, 1, size());
  while (m < size() && x > (*this)[m].core_right) ++m;
  while (m > 1 && x <= (*this)[m].core_left) --m;
  return m;
}

std::pair<std::int64_t, std::int64_t> IntervalScheme::lattice_range(int m, double scale) const {
  const auto& iv = (*this)[m];
  const std::int64_t lo = m == 1 ? 0 : static_cast<std::int64_t>(std::floor(scale * iv.core_left)) + 1;
  const std::int64_t hi = m == size() ? kUnbounded : static_cast<std::int64_t>(std::floor(scale * iv.core_right));
  return {lo, hi};
}

LocalizationTails localization_check(const IntervalScheme& scheme, double p, int m) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("localization_check: p outside [0,1]");
  const double n = scheme.n();
  const auto& iv = scheme[m];
  LocalizationTails out;
  const double lambda = n * p;
  if (scheme.locate(p) == m) {
    const auto lo = static_cast<std::int64_t>(std::ceil(n * iv.enlarged_left));
    const auto hi = static_cast<std::int64_t>(std::floor(n * iv.enlarged_right));
    const double below = lo > 0 ? poisson_interval_prob(lambda, 0, lo - 1) : 0.0;
    const double above = poisson_interval_prob(lambda, hi + 1, kUnbounded);
    out.tail_out = below + above;
  }
  if (p < iv.enlarged_left || p > iv.enlarged_right) {
    const auto [lo, hi] = scheme.lattice_range(m, n);
    out.tail_in = poisson_interval_prob(lambda, lo, hi);
  }
  return out;
}

double worst_localization_tail(const IntervalScheme& scheme) {
  double worst = 0.0;
  auto take = [&](const LocalizationTails& t) {
    if (t.tail_out) worst = std::max(worst, *t.tail_out);
    if (t.tail_in) worst = std::max(worst, *t.tail_in);
  };
  constexpr int kGrid = 32;
  for (int m = 1; m <= scheme.size(); ++m) {
    const auto& iv = scheme[m];
    const double left = m == 1 ? 0.0 : std::nextafter(iv.core_left, 2.0);
    for (int g = 0; g <= kGrid; ++g) {
      const double p = left + (iv.core_right - left) * g / kGrid;
      take(localization_check(scheme, std::min(p, iv.core_right), m));
    }
    if (iv.enlarged_left > 0.0) take(localization_check(scheme, std::nextafter(iv.enlarged_left, -1.0), m));
    if (iv.enlarged_right < 1.0) take(localization_check(scheme, std::nextafter(iv.enlarged_right, 2.0), m));
  }
  return worst;
}

}  // namespace lmm
