#pragma once

#include <stdexcept>
#include <string>

namespace semnav {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent user configuration. The CLI maps this to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// World generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Episode sampling exhausted its retry budget.
class SamplingError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or another unrecoverable optimizer state.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// No goal could be selected on the current belief map.
class GoalSelectionError : public Error {
 public:
  using Error::Error;
};

// Malformed checkpoint, dataset, or world file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace semnav
