#include "lmm/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "lmm/errors.hpp"
#include "lmm/pmf.hpp"

namespace lmm {

namespace {
constexpr double kMassTol = 1e-12;
constexpr double kMergeTol = 1e-14;
constexpr std::int64_t kMaxEnumerateN = 20;
constexpr std::int64_t kMaxProfileN = 12;
constexpr Eigen::Index kMaxProfileK = 8;
}  // namespace

DiscreteDistribution::DiscreteDistribution(Vector masses) : masses_(std::move(masses)) {
  if (masses_.size() == 0) throw DomainError("distribution needs at least one symbol");
  for (Eigen::Index i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] >= 0.0) || !std::isfinite(masses_[i])) throw DomainError("negative or non-finite mass");
  }
  if (std::fabs(masses_.sum() - 1.0) > kMassTol) throw DomainError("masses do not sum to 1");
}

DiscreteDistribution DiscreteDistribution::uniform(Eigen::Index k) {
  if (k < 1) throw DomainError("uniform distribution needs k >= 1");
  return DiscreteDistribution(Vector::Constant(k, 1.0 / static_cast<double>(k)));
}

DiscreteDistribution DiscreteDistribution::point_mass(Eigen::Index k) {
  if (k < 1) throw DomainError("point mass needs k >= 1");
  Vector v = Vector::Zero(k);
  v[0] = 1.0;
  return DiscreteDistribution(std::move(v));
}

DiscreteDistribution DiscreteDistribution::padded(Eigen::Index k) const {
  if (k < masses_.size()) throw DomainError("cannot pad to a smaller support");
  Vector v = Vector::Zero(k);
  v.head(masses_.size()) = masses_;
  return DiscreteDistribution(std::move(v));
}

Vector DiscreteDistribution::sorted() const {
  Vector v = masses_;
  std::sort(v.data(), v.data() + v.size());
  return v;
}

Histogram::Histogram(std::vector<std::int64_t> c) : counts(std::move(c)) {
  for (auto x : counts) {
    if (x < 0) throw DomainError("negative histogram count");
    sample_size += x;
  }
}

Profile::Profile(std::vector<std::int64_t> multiplicities) : phi_(std::move(multiplicities)) {
  if (phi_.empty()) throw DomainError("empty profile");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    if (phi_[i] < 0) throw DomainError("negative profile entry");
    total += static_cast<std::int64_t>(i + 1) * phi_[i];
  }
  if (total != sample_size()) throw DomainError("profile is inconsistent: sum_i i*phi_i != n");
}

std::int64_t Profile::operator()(std::int64_t i) const {
  if (i < 1 || i > sample_size()) return 0;
  return phi_[static_cast<std::size_t>(i - 1)];
}

std::int64_t Profile::distinct() const {
  std::int64_t s = 0;
  for (auto x : phi_) s += x;
  return s;
}

std::vector<std::int64_t> Profile::counts_descending() const {
  std::vector<std::int64_t> out;
  for (std::int64_t i = sample_size(); i >= 1; --i) out.insert(out.end(), static_cast<std::size_t>((*this)(i)), i);
  return out;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!(a.location >= 0.0 && a.location <= 1.0)) throw DomainError("atom location outside [0,1]");
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw DomainError("negative or non-finite atom weight");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && a.location - atoms_.back().location <= kMergeTol) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
}

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

bool AtomicMeasure::is_probability(double tol) const { return std::fabs(total_mass() - 1.0) <= tol; }

double AtomicMeasure::moment(int d, double center) const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * std::pow(a.location - center, d);
  return s;
}

double AtomicMeasure::mass_in(double a, double b) const {
  double s = 0.0;
  for (const auto& at : atoms_)
    if (at.location >= a && at.location <= b) s += at.weight;
  return s;
}

AtomicMeasure AtomicMeasure::operator+(const AtomicMeasure& other) const {
  std::vector<Atom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return AtomicMeasure(std::move(all));
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  std::vector<Atom> all = atoms_;
  for (auto& a : all) a.weight *= factor;
  return AtomicMeasure(std::move(all));
}

AtomicMeasure dirac(double location, double weight) { return AtomicMeasure({{location, weight}}); }

Histogram histogram_of_samples(std::span<const std::int64_t> samples, std::int64_t k) {
  if (k < 1) throw DomainError("alphabet size must be positive");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (auto s : samples) {
    if (s < 1 || s > k) throw DomainError("symbol index " + std::to_string(s) + " outside [1, k]");
    ++counts[static_cast<std::size_t>(s - 1)];
  }
  return Histogram(std::move(counts));
}

Profile profile_of_histogram(const Histogram& h) {
  if (h.sample_size < 1) throw DomainError("empty profile: sample size is 0");
  std::vector<std::int64_t> phi(static_cast<std::size_t>(h.sample_size), 0);
  for (auto c : h.counts)
    if (c > 0) ++phi[static_cast<std::size_t>(c - 1)];
  return Profile(std::move(phi));
}

std::vector<Profile> enumerate_profiles(std::int64_t n) {
  if (n < 1) throw DomainError("enumerate_profiles needs n >= 1");
  if (n > kMaxEnumerateN) throw ResourceError("enumerate_profiles: n above desk-scale cap of 20");
  std::vector<Profile> out;
  std::vector<std::int64_t> phi(static_cast<std::size_t>(n), 0);
  // Partitions with parts in non-increasing order, largest part <= max_part.
  std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t remaining, std::int64_t max_part) {
    if (remaining == 0) {
      out.emplace_back(phi);
      return;
    }
    for (std::int64_t part = std::min(remaining, max_part); part >= 1; --part) {
      ++phi[static_cast<std::size_t>(part - 1)];
      rec(remaining - part, part);
      --phi[static_cast<std::size_t>(part - 1)];
    }
  };
  rec(n, n);
  return out;
}

ProfileLikelihood::ProfileLikelihood(const Profile& phi, Eigen::Index k) : k_(k) {
  const std::int64_t n = phi.sample_size();
  log_n_factorial_ = log_factorial(n);
  auto counts = phi.counts_descending();
  if (static_cast<Eigen::Index>(counts.size()) > k) return;  // not realizable
  counts.resize(static_cast<std::size_t>(k), 0);
  std::sort(counts.begin(), counts.end());
  // Every distinct arrangement of the count multiset over the k symbols.
  double log_coeff = log_n_factorial_;
  for (auto c : counts) log_coeff -= log_factorial(c);
  do {
    histograms_.push_back(counts);
    log_coeffs_.push_back(log_coeff);
  } while (std::next_permutation(counts.begin(), counts.end()));
}

double ProfileLikelihood::operator()(const Vector& p) const {
  if (p.size() != k_) throw DomainError("ProfileLikelihood: support size mismatch");
  double total = 0.0;
  for (std::size_t h = 0; h < histograms_.size(); ++h) {
    double term = std::exp(log_coeffs_[h]);
    for (Eigen::Index j = 0; j < k_ && term != 0.0; ++j) {
      const auto c = histograms_[h][static_cast<std::size_t>(j)];
      if (c > 0) term *= std::pow(p[j], static_cast<double>(c));
    }
    total += term;
  }
  return total;
}

double profile_probability(const DiscreteDistribution& p, const Profile& phi) {
  if (phi.sample_size() > kMaxProfileN) throw ResourceError("profile_probability: n above cap of 12");
  std::vector<double> nz;
  for (Eigen::Index i = 0; i < p.support_size(); ++i)
    if (p[i] > 0.0) nz.push_back(p[i]);
  if (static_cast<Eigen::Index>(nz.size()) > kMaxProfileK)
    throw ResourceError("profile_probability: more than 8 nonzero masses");
  const Vector v = Eigen::Map<const Vector>(nz.data(), static_cast<Eigen::Index>(nz.size()));
  return ProfileLikelihood(phi, v.size())(v);
}

double sorted_l1(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  const Eigen::Index k = std::max(p.support_size(), q.support_size());
  return (p.padded(k).sorted() - q.padded(k).sorted()).cwiseAbs().sum();
}

AtomicMeasure measure_of(const DiscreteDistribution& p) {
  const double w = 1.0 / static_cast<double>(p.support_size());
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(p.support_size()));
  for (Eigen::Index i = 0; i < p.support_size(); ++i) atoms.push_back({p[i], w});
  return AtomicMeasure(std::move(atoms));
}

}  // namespace lmm
