#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace lmm {

/// min c^T x  subject to  A x <= b,  x >= 0.  b may have negative entries.
template <class Scalar>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Matrix A;
  Vec b;
  Vec c;
};

enum class SimplexStatus { optimal, infeasible, unbounded, iteration_cap };

template <class Scalar>
struct SimplexResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar objective = 0;
  SimplexStatus status = SimplexStatus::optimal;
  std::int64_t pivots = 0;
};

struct SimplexOptions {
  std::int64_t max_pivots = 1'000'000;
  /// Reduced-cost optimality threshold.
  double tolerance = 1e-9;
  /// Smallest admissible pivot element.
  double pivot_tolerance = 1e-11;
  /// Consecutive degenerate pivots before switching from Dantzig to Bland.
  int bland_after = 50;
};

namespace detail {

template <class Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  Tableau(const LinearProgram<Scalar>& lp, const SimplexOptions& opt) : opt_(opt) {
    rows_ = lp.A.rows();
    vars_ = lp.A.cols();
    std::vector<Eigen::Index> flipped;
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (lp.b[i] < 0) flipped.push_back(i);
    arts_ = static_cast<Eigen::Index>(flipped.size());
    cols_ = vars_ + rows_ + arts_;
    T_ = Matrix::Zero(rows_, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(rows_), 0);
    Eigen::Index a = 0;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Scalar sign = lp.b[i] < 0 ? Scalar(-1) : Scalar(1);
      T_.row(i).head(vars_) = sign * lp.A.row(i);
      T_(i, vars_ + i) = sign;
      T_(i, cols_) = sign * lp.b[i];
      if (sign < 0) {
        T_(i, vars_ + rows_ + a) = 1;
        basis_[static_cast<std::size_t>(i)] = vars_ + rows_ + a;
        ++a;
      } else {
        basis_[static_cast<std::size_t>(i)] = vars_ + i;
      }
    }
    cost_ = Vec::Zero(cols_);
    cost_.head(vars_) = lp.c;
  }

  SimplexResult<Scalar> solve() {
    SimplexResult<Scalar> res;
    const Scalar tol = Scalar(opt_.tolerance);
    if (arts_ > 0) {
      Vec phase1 = Vec::Zero(cols_);
      phase1.tail(arts_).setOnes();
      set_reduced(phase1);
      const auto st = iterate(cols_, res.pivots);
      if (st == SimplexStatus::iteration_cap) return finish(res, st);
      Scalar scale = 1;
      for (Eigen::Index i = 0; i < rows_; ++i) scale = std::max(scale, Scalar(std::abs(T_(i, cols_))));
      if (-reduced_(cols_) > tol * scale) return finish(res, SimplexStatus::infeasible);
      drive_out_artificials();
    }
    set_reduced(cost_);
    const auto st = iterate(vars_ + rows_, res.pivots);
    return finish(res, st);
  }

 private:
  // Reduced costs for cost vector c given the current basis; last entry
  // holds -objective.
  void set_reduced(const Vec& c) {
    reduced_ = RowVec::Zero(cols_ + 1);
    reduced_.head(cols_) = c.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Scalar cb = c[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0) reduced_ -= cb * T_.row(i);
    }
  }

  void pivot(Eigen::Index p, Eigen::Index q) {
    T_.row(p) /= T_(p, q);
    const RowVec prow = T_.row(p);
    Vec col = T_.col(q);
    col(p) = 0;
    T_.noalias() -= col * prow;
    reduced_ -= reduced_(q) * prow;
    basis_[static_cast<std::size_t>(p)] = q;
  }

  SimplexStatus iterate(Eigen::Index allowed_cols, std::int64_t& pivots) {
    const Scalar tol = Scalar(opt_.tolerance);
    const Scalar pivot_tol = Scalar(opt_.pivot_tolerance);
    int degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= opt_.bland_after;
      Eigen::Index q = -1;
      Scalar best = -tol;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (reduced_(j) < best) {
          q = j;
          if (bland) break;
          best = reduced_(j);
        }
      }
      if (q < 0) return SimplexStatus::optimal;
      // Minimum ratio with a relative tie band; ties go to the lowest basic
      // index. Roundoff can leave tiny negative right-hand sides; those
      // count as zero.
      Eigen::Index p = -1;
      Scalar ratio = std::numeric_limits<Scalar>::infinity();
      const Scalar rel = Scalar(1e-12);
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const Scalar a = T_(i, q);
        if (a > pivot_tol) {
          const Scalar r = std::max(Scalar(0), T_(i, cols_)) / a;
          const Scalar band = rel * ratio;
          if (p < 0 || r < ratio - band) {
            ratio = r;
            p = i;
          } else if (r <= ratio + band && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(p)]) {
            ratio = std::min(ratio, r);
            p = i;
          }
        }
      }
      if (p < 0) return SimplexStatus::unbounded;
      if (pivots >= opt_.max_pivots) return SimplexStatus::iteration_cap;
      degenerate_run = ratio <= tol ? degenerate_run + 1 : 0;
      pivot(p, q);
      ++pivots;
    }
  }

  void drive_out_artificials() {
    const Scalar tol = Scalar(opt_.tolerance);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < vars_ + rows_) continue;
      for (Eigen::Index j = 0; j < vars_ + rows_; ++j) {
        if (std::abs(T_(i, j)) > tol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  SimplexResult<Scalar>& finish(SimplexResult<Scalar>& res, SimplexStatus st) {
    res.status = st;
    res.x = Vec::Zero(vars_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const auto j = basis_[static_cast<std::size_t>(i)];
      if (j < vars_) res.x[j] = std::max(Scalar(0), T_(i, cols_));
    }
    res.objective = cost_.head(vars_).dot(res.x);
    return res;
  }

  SimplexOptions opt_;
  Eigen::Index rows_ = 0, vars_ = 0, arts_ = 0, cols_ = 0;
  Matrix T_;
  RowVec reduced_;
  Vec cost_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// Dense two-phase tableau simplex. Dantzig pricing with lowest-index ties,
/// switching to Bland's rule after a run of degenerate pivots. Deterministic.
template <class Scalar>
SimplexResult<Scalar> solve_lp(const LinearProgram<Scalar>& lp, const SimplexOptions& opt = {}) {
  return detail::Tableau<Scalar>(lp, opt).solve();
}

/// max_i (A x - b)_i together with the most negative x_j, as a nonnegative
/// number; 0 for a feasible point.
template <class Scalar>
Scalar max_violation(const LinearProgram<Scalar>& lp, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  Scalar v = 0;
  if (x.size() > 0) v = std::max(v, -x.minCoeff());
  if (lp.A.rows() > 0) v = std::max(v, (lp.A * x - lp.b).maxCoeff());
  return v;
}

}  // namespace lmm
