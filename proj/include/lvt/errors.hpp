#pragma once

#include <stdexcept>
#include <string>

namespace lvt {

/// Non-finite or otherwise physically meaningless vehicle state or action.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model was evaluated outside its domain of validity (e.g. IDM with a
/// non-positive gap, aggressiveness outside [0, 1]).
class ModelDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The simulated world reached a state that the models are supposed to make
/// impossible, such as two main-road vehicles overlapping.
class SimulationIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario, settings or data file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lvt
