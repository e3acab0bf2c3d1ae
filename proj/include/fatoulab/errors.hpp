#pragma once

#include <stdexcept>
#include <string>

namespace fatoulab {

/// Tail policy cannot produce a truncation index (radius beyond the
/// exact-evaluation ceiling, or the enumeration cap would be exceeded).
struct TruncationUnavailable : std::runtime_error {
  explicit TruncationUnavailable(const std::string& what) : std::runtime_error(what) {}
};

/// Series evaluation failed at a point where it was required.
struct EvaluationFailed : std::runtime_error {
  explicit EvaluationFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Too few usable samples for an estimation window.
struct InsufficientSamples : std::runtime_error {
  explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

/// Gap analysis needs more exponents than the scan produced.
struct InsufficientExponents : std::runtime_error {
  explicit InsufficientExponents(const std::string& what) : std::runtime_error(what) {}
};

/// Type classification is undefined when the order is zero or infinite.
struct UndefinedForZeroOrder : std::runtime_error {
  explicit UndefinedForZeroOrder(const std::string& what) : std::runtime_error(what) {}
};

/// Seed-selection rules need a positive, finite lower order.
struct UndefinedForZeroLowerOrder : std::runtime_error {
  explicit UndefinedForZeroLowerOrder(const std::string& what) : std::runtime_error(what) {}
};

/// Power-law fit disagreed with exact evaluation on the overlap window,
/// or produced a degenerate growth exponent.
struct FitRejected : std::runtime_error {
  explicit FitRejected(const std::string& what) : std::runtime_error(what) {}
};

/// The radius recurrence failed to increase from its seed.
struct SeedTooSmall : std::runtime_error {
  explicit SeedTooSmall(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration input (spec strings, key=value files, CSV).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An inequality that should hold from some radius onward never reached a
/// holding tail on the supplied grid; the message names the largest
/// violating radius so the asymptotic shortfall is auditable.
struct NotSatisfiedOnGrid : std::runtime_error {
  explicit NotSatisfiedOnGrid(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fatoulab
