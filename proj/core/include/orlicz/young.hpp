#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "orlicz/errors.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

enum class YoungKind { Power, ExpPower, LLogL, Custom };

/// A Young function: even, convex, zero only at zero, superlinear at
/// infinity. Catalog entries evaluate through closed forms that stay accurate
/// near zero and saturate to +infinity instead of overflowing. Custom wraps
/// an arbitrary evaluator and is how numerically composed functions
/// (conjugates, inverses, compositions) re-enter the calculus.
class YoungFunction {
 public:
  /// x^p / p with p > 1.
  [[nodiscard]] static YoungFunction power(double p);
  /// exp(x^p) - x^p - 1 with p >= 1.
  [[nodiscard]] static YoungFunction exp_power(double p);
  /// (1 + x^p) log(1 + x^p) - x^p with p >= 1.
  [[nodiscard]] static YoungFunction l_log_l(double p);
  [[nodiscard]] static YoungFunction custom(std::string name, std::function<double(double)> eval);

  /// Evaluates at |x|; negative inputs fold by evenness.
  [[nodiscard]] double operator()(double x) const;

  /// log Phi(exp(t)), stable far outside the range of double. Catalog entries
  /// use closed forms; Custom falls back to log of the evaluator and inherits
  /// its overflow behaviour.
  [[nodiscard]] double log_value(double t) const;

  [[nodiscard]] YoungKind kind() const { return kind_; }
  [[nodiscard]] double param() const { return p_; }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  YoungFunction(YoungKind kind, double p, std::string name, std::function<double(double)> eval)
      : kind_(kind), p_(p), name_(std::move(name)), eval_(std::move(eval)) {}

  YoungKind kind_;
  double p_;
  std::string name_;
  std::function<double(double)> eval_;
};

[[nodiscard]] inline double evaluate(const YoungFunction& phi, double x) { return phi(x); }

/// Legendre conjugate Psi(y) = sup_{x >= 0} (x|y| - Phi(x)). The bracket
/// doubles from 1 until the objective falls three consecutive times, then the
/// maximizer is located by derivative-sign bisection (200 iterations or until
/// the bracket is below tol * max(1, value)). Throws ConjugateBracketError
/// carrying the partial supremum if the bracket passes `bracket_cap`.
[[nodiscard]] double conjugate(const YoungFunction& phi, double y, double tol = 1e-9,
                               double bracket_cap = 1e154);

/// Inverse on [0, inf): returns x with |Phi(x) - y| <= tol * max(1, y).
[[nodiscard]] double inverse(const YoungFunction& phi, double y, double tol = 1e-9);

/// The conjugate as a reusable function: exact closed forms for the power
/// family and the p = 1 exp_power/l_log_l pair, otherwise a dense log-log
/// tabulation of `conjugate` (about 1e-5 relative accuracy).
[[nodiscard]] YoungFunction conjugate_function(const YoungFunction& phi, double tol = 1e-9);

/// outer(inner^{-1}(x)); the inverse is closed-form for power, bisection
/// otherwise.
[[nodiscard]] YoungFunction compose_with_inverse(const YoungFunction& outer,
                                                 const YoungFunction& inner);

/// With Psi_i the conjugate of phi_i, evaluates y -> sup_t (Psi1(t) Psi1(y)
/// - Psi2(t)), which equals Psi3(Psi1(y)) for Psi3 the conjugate of
/// Psi2 ∘ Psi1^{-1}. The objective is unimodal in t because it is concave in
/// x = Psi1(t).
[[nodiscard]] YoungFunction dual_composite(const YoungFunction& phi1, const YoungFunction& phi2);

enum class GrowthCondition { Delta2, DeltaPrime, NablaPrime };

/// Empirical growth-condition certificate over a stored grid; `holds` means
/// holds-empirically on that grid, never a proof. For Delta2 the constant is
/// the smallest k with Phi(2x) <= k Phi(x); DeltaPrime the smallest c with
/// Phi(xy) <= c Phi(x) Phi(y); NablaPrime the smallest grid b with
/// Phi(bxy) >= Phi(x) Phi(y). A constant above `cap` (or, for NablaPrime, no
/// grid b at all) yields a counterexample point instead.
struct GrowthCertificate {
  GrowthCondition condition;
  bool holds = false;
  double constant = 0.0;
  double threshold = 0.0;
  SamplingGrid grid;
  double cap = 0.0;
  std::optional<std::pair<double, double>> counterexample;
};

[[nodiscard]] GrowthCertificate check_growth(const YoungFunction& phi, GrowthCondition condition,
                                             SamplingGrid grid = {}, double cap = 1e6);

/// Re-runs a certificate against its own stored grid.
[[nodiscard]] bool reverify(const GrowthCertificate& cert, const YoungFunction& phi);

/// Domination Phi2 ≺ Phi1: searches a geometric ladder of constants a for
/// Phi2(x) <= Phi1(a x) on every grid point at or above some threshold, with
/// at least 16 passing points above it, comparing in log space. A candidate
/// is accepted only if the log margin is not shrinking across that tail
/// window; a large constant can push the crossover just past any finite
/// grid, and the narrowing margin is what betrays it. `holds == false`
/// reports the counterexample trend; `worst` carries (last a tried, point
/// where it failed).
struct DominationCertificate {
  bool holds = false;
  double a = 0.0;
  double threshold = 0.0;
  SamplingGrid grid;
  std::optional<std::pair<double, double>> worst;
};

[[nodiscard]] DominationCertificate dominates(const YoungFunction& phi1, const YoungFunction& phi2,
                                              SamplingGrid grid = {});
[[nodiscard]] bool reverify(const DominationCertificate& cert, const YoungFunction& phi1,
                            const YoungFunction& phi2);

enum class TripleDirection { Phi2Left, Phi1Left };

/// Certificate for Phi2(xy) <= Phi1(x) + Phi3(y) (Phi2Left) or the same
/// inequality with Phi1 and Phi2 swapped (Phi1Left), checked on the grid
/// product including zero rows. Violations below 1e-12 relative are treated
/// as roundoff.
struct TripleCertificate {
  bool holds = false;
  TripleDirection direction = TripleDirection::Phi2Left;
  SamplingGrid grid;
  std::optional<std::pair<double, double>> violation;
};

[[nodiscard]] TripleCertificate check_triple_inequality(const YoungFunction& phi1,
                                                        const YoungFunction& phi2,
                                                        const YoungFunction& phi3,
                                                        TripleDirection direction = TripleDirection::Phi2Left,
                                                        SamplingGrid grid = {});
[[nodiscard]] bool reverify(const TripleCertificate& cert, const YoungFunction& phi1,
                            const YoungFunction& phi2, const YoungFunction& phi3);

/// Grid checks of the Young-function axioms: zero at zero, positivity,
/// midpoint convexity, and Phi(x)/x nondecreasing with overall growth.
struct ValidityReport {
  bool valid = true;
  std::string failure;
};

[[nodiscard]] ValidityReport validate_young(const YoungFunction& phi, SamplingGrid grid = {});

}  // namespace orlicz
