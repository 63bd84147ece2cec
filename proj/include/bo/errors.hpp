#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bo {

// Process exit codes shared by the CLI and the error hierarchy.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitNumerical = 2, kExitProperty = 3 };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return kExitNumerical; }
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitInvalid; }
};

// Grid too coarse for the requested band.
class AliasingError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class OutOfNeighborhood : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegenerateProduct : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegenerateProjector : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class InversionFailure : public NumericalFailure {
 public:
  InversionFailure(const std::string& what, std::vector<double> history)
      : NumericalFailure(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

// A verifier found a counterexample to a claimed identity.
class PropertyViolation : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitProperty; }
};

// Non-fatal diagnostics (truncation, round-off dominated steps) go here.
using WarningSink = std::function<void(const std::string&)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace bo
