#pragma once

#include <stdexcept>
#include <string>

namespace hb {

/// Bad input: malformed curves, non-Heegner discriminants, p | N and so on.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not reach its stated accuracy (precision shortfall,
/// failed algebraic recognition, unsaturated generator).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The mod-p image could not be certified surjective.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant; never expected on valid input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hb
