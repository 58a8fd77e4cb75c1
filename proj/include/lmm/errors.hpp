#pragma once

#include <stdexcept>
#include <string>

namespace lmm {

/// Input outside the mathematical domain of an operation (negative rate,
/// out-of-range symbol, invalid probability vector, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A desk-scale cap (enumeration size, sample size, trial count) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query point lies outside the region covered by an interval scheme.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Inconsistent configuration: degenerate interval scheme, rate mismatch.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A candidate measure puts mass outside the enlarged interval it belongs to.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two measures with different total mass were compared.
class MassMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function passed as a Lipschitz witness has a slope outside [-1, 1].
class InvalidWitnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A constructive procedure failed its own post-verification.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A loss/metric pair violated the compatibility triangle inequality.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lmm
