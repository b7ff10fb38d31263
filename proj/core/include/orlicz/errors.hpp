#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

// An operation's stated hypotheses failed their empirical check; the message
// names the certificate or the violating point.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature did not converge under the requested budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_estimate(previous), last_estimate(last) {}

  double previous_estimate;
  double last_estimate;
};

// The conjugate bracket grew past its cap; carries the supremum found so far.
class ConjugateBracketError : public std::runtime_error {
 public:
  ConjugateBracketError(const std::string& what, double partial)
      : std::runtime_error(what), partial_supremum(partial) {}

  double partial_supremum;
};

}  // namespace orlicz
