#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

namespace lmm {

using Vector = Eigen::VectorXd;

/// Probability vector p = (p_1, ..., p_k).
class DiscreteDistribution {
 public:
  /// Validates nonnegativity and |sum - 1| <= 1e-12.
  explicit DiscreteDistribution(Vector masses);
  static DiscreteDistribution uniform(Eigen::Index k);
  static DiscreteDistribution point_mass(Eigen::Index k);

  Eigen::Index support_size() const { return masses_.size(); }
  double operator[](Eigen::Index i) const { return masses_[i]; }
  const Vector& masses() const { return masses_; }

  /// Copy padded with zeros to length k (k >= support_size()).
  DiscreteDistribution padded(Eigen::Index k) const;
  /// Masses sorted ascending.
  Vector sorted() const;

 private:
  Vector masses_;
};

struct Histogram {
  std::vector<std::int64_t> counts;
  std::int64_t sample_size = 0;

  Histogram() = default;
  /// sample_size is the sum of counts; negative counts are rejected.
  explicit Histogram(std::vector<std::int64_t> c);
  std::size_t support_size() const { return counts.size(); }
};

/// phi[i-1] = number of symbols that appear exactly i times, i = 1..n.
class Profile {
 public:
  /// Validates sum_i i * phi_i == n with n = multiplicities.size().
  explicit Profile(std::vector<std::int64_t> multiplicities);

  std::int64_t sample_size() const { return static_cast<std::int64_t>(phi_.size()); }
  /// phi_i for i in [1, n]; 0 outside.
  std::int64_t operator()(std::int64_t i) const;
  const std::vector<std::int64_t>& multiplicities() const { return phi_; }
  /// Number of distinct observed symbols, sum_i phi_i.
  std::int64_t distinct() const;
  /// Counts in descending order, one entry per observed symbol.
  std::vector<std::int64_t> counts_descending() const;

  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;

 private:
  std::vector<std::int64_t> phi_;
};

struct Atom {
  double location;
  double weight;
};

/// Finite weighted sum of point masses on [0,1]. Atoms are kept sorted by
/// location; atoms within 1e-14 are merged and zero-weight atoms dropped.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;
  bool is_probability(double tol = 1e-12) const;
  /// Integral of x^d (d >= 0) or, with a center, of (x - c)^d.
  double moment(int d, double center = 0.0) const;
  /// Mass on the closed interval [a, b].
  double mass_in(double a, double b) const;
  AtomicMeasure operator+(const AtomicMeasure& other) const;
  AtomicMeasure scaled(double factor) const;

 private:
  std::vector<Atom> atoms_;
};

AtomicMeasure dirac(double location, double weight = 1.0);

Histogram histogram_of_samples(std::span<const std::int64_t> samples, std::int64_t k);
Profile profile_of_histogram(const Histogram& h);

/// All profiles of size n (integer partitions of n), n <= 20.
std::vector<Profile> enumerate_profiles(std::int64_t n);

/// Exact P(p, phi), n <= 12 and at most 8 nonzero masses. Zero masses are
/// dropped before enumeration; they cannot emit symbols.
double profile_probability(const DiscreteDistribution& p, const Profile& phi);

/// Precomputed histogram classes for one (profile, support size) pair, for
/// repeated likelihood evaluation in the PML oracle.
class ProfileLikelihood {
 public:
  ProfileLikelihood(const Profile& phi, Eigen::Index k);
  /// P(p, phi) where p has exactly k entries (zeros allowed).
  double operator()(const Vector& p) const;
  Eigen::Index support_size() const { return k_; }

 private:
  Eigen::Index k_;
  double log_n_factorial_;
  std::vector<std::vector<std::int64_t>> histograms_;
  std::vector<double> log_coeffs_;
};

double sorted_l1(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// mu_p = (1/k) sum_i delta_{p_i}.
AtomicMeasure measure_of(const DiscreteDistribution& p);

}  // namespace lmm
