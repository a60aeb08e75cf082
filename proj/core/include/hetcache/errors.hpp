#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hetcache {

/// Bad caller input: out-of-range parameters, malformed policies, etc.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that should have produced a finite number did not.
/// Carries the offending policy when one is involved.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what, std::vector<double> policy = {})
      : std::runtime_error(what), policy_(std::move(policy)) {}
  const std::vector<double>& policy() const noexcept { return policy_; }

 private:
  std::vector<double> policy_;
};

/// The requested formula does not apply to this configuration.
class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A snapshot is missing state that a later stage needs.
class InvalidSnapshot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment description could not be parsed or is inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No helper density in the search bracket reaches the requested ASE.
class InfeasibleTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetcache
