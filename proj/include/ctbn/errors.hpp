#ifndef CTBN_ERRORS_HPP
#define CTBN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctbn {

// Base class for all toolkit errors.
struct CtbnError : std::runtime_error {
  explicit CtbnError(const std::string& msg) : std::runtime_error(msg) {}
};

// Model construction or validation failed (bad cardinality, row sums, ...).
struct InvalidModelError : CtbnError {
  using CtbnError::CtbnError;
};

// Malformed input data (unknown node in an event, broken file, ...).
struct FormatError : CtbnError {
  using CtbnError::CtbnError;
};

// Amalgamated state space exceeds the configured cap.
struct OracleTooLargeError : CtbnError {
  using CtbnError::CtbnError;
};

// Exhaustive candidate enumeration would be astronomically large.
struct SearchSpaceTooLargeError : CtbnError {
  using CtbnError::CtbnError;
};

// ROC/PR metrics need at least one positive and one negative label.
struct DegenerateMetricError : CtbnError {
  using CtbnError::CtbnError;
};

// An observation has zero likelihood under every state of a node.
struct ImpossibleEvidenceError : CtbnError {
  using CtbnError::CtbnError;
};

// Forward integration produced a clearly negative marginal; the time step
// is too coarse for the current effective rates.
struct StepSizeError : CtbnError {
  using CtbnError::CtbnError;
};

}  // namespace ctbn

#endif
