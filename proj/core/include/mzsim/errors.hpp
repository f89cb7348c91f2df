#pragma once

#include <stdexcept>
#include <string>

namespace mzsim {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain numeric input.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed AOM switching schedule.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// Invalid network geometry passed to a constructor.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Unknown component or detector id.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Simulation request that cannot be executed (sample guard, invalid network).
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to converge within the node budget.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Profile cannot be classified or analysed (flat, too few maxima).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration text, key or value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mzsim
