#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steiner/types.hpp"

namespace steiner {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (bad token, wrong field count). Carries the 1-based
/// line number when raised by a line-oriented reader.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that violates a documented precondition
/// (non-positive weight, empty seed set, out-of-range parameter, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The seed set does not lie in a single connected component. Carries the
/// seeds that could not be reached from the rest of the set.
class SeedsDisconnectedError : public Error {
 public:
  SeedsDisconnectedError(std::string message, std::vector<VertexId> unreached)
      : Error(std::move(message)), unreached_seeds_(std::move(unreached)) {}

  const std::vector<VertexId>& unreached_seeds() const { return unreached_seeds_; }

 private:
  std::vector<VertexId> unreached_seeds_;
};

/// The exact solver declined an instance larger than its guard limits.
class OracleRefusedError : public Error {
 public:
  using Error::Error;
};

/// Messaging-engine misuse or protocol breach (out-of-range target, send
/// outside a run, ...).
class EngineError : public Error {
 public:
  using Error::Error;
};

/// A phase exceeded its message budget; almost always a lost-termination or
/// livelock symptom rather than a legitimate workload.
class BudgetExceededError : public EngineError {
 public:
  using EngineError::EngineError;
};

/// An internal invariant failed. Indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace steiner
