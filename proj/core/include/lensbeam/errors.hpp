#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace lensbeam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, failed validation, or non-conforming dimensions.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Raised when beam selection is attempted on an all-zero beamspace channel.
class DegenerateChannelError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown inside a filter (factorization or inversion failure).
/// The harness attaches the time slot at which it happened.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::optional<int> slot = std::nullopt)
      : Error(slot ? what + " (slot " + std::to_string(*slot) + ")" : what),
        detail_(what),
        slot_(slot) {}

  std::optional<int> slot() const { return slot_; }
  const std::string& detail() const { return detail_; }

  NumericalError at_slot(int slot) const { return NumericalError(detail_, slot); }

 private:
  std::string detail_;
  std::optional<int> slot_;
};

}  // namespace lensbeam
