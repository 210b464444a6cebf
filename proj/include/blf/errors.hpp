#pragma once

#include <stdexcept>
#include <string>

namespace blf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction argument (non-positive gain, indefinite inertia, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A tracking error reached its constraint radius. `time` is NaN when the
/// breach was detected outside a simulation (e.g. a direct barrier_gain call).
class ConstraintBreach : public Error {
 public:
  ConstraintBreach(const std::string& what, int joint, double time);
  int joint() const { return joint_; }
  double time() const { return time_; }

 private:
  int joint_;
  double time_;
};

class NonFinite : public Error {
 public:
  NonFinite(const std::string& what, double time);
  double time() const { return time_; }

 private:
  double time_;
};

class SingularMass : public Error {
 public:
  using Error::Error;
};

/// Scenario file could not be parsed or failed validation.
class ConfigParse : public Error {
 public:
  using Error::Error;
};

class TraceParse : public Error {
 public:
  using Error::Error;
};

class UnknownParameter : public Error {
 public:
  using Error::Error;
};

}  // namespace blf
