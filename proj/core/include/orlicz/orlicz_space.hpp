#pragma once

#include "orlicz/measure.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// The modular rho(f) = integral of Phi(scale |f|) dmu, with the full
/// integration diagnostics attached.
[[nodiscard]] IntegralResult modular(const YoungFunction& phi, const MeasurableFunction& f,
                                     const MeasureSpace& space, double scale = 1.0,
                                     IntegrationBudget budget = {});

struct NormResult {
  double value = 0.0;
  bool diverged = false;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Luxemburg norm inf { k > 0 : rho(f / k) <= 1 } by bisection on k. A scale
/// counts as admissible only when the modular both settles and is <= 1, so
/// the returned value (the upper bracket end) always satisfies
/// rho(f / value) <= 1. `diverged` means no k up to 2^300 was admissible.
[[nodiscard]] NormResult luxemburg_norm(const YoungFunction& phi, const MeasurableFunction& f,
                                        const MeasureSpace& space, double tol = 1e-9,
                                        IntegrationBudget budget = {});

struct MembershipReport {
  bool finite = false;
  double scale = 0.0;
  IntegralResult at_scale;
};

/// f lies in the Orlicz space when rho(k f) is finite for some k > 0. Scales
/// k = 2^0 .. 2^-20 are tried in order; finiteness requires the atom tail to
/// stabilize and the interval part to converge, so a truncated family whose
/// partial sums are still climbing at the budget is excluded even though
/// every partial sum is finite.
[[nodiscard]] MembershipReport member(const YoungFunction& phi, const MeasurableFunction& f,
                                      const MeasureSpace& space, IntegrationBudget budget = {});

/// rho(f) <= K implies norm(f) <= K + 1: convexity pulls rho(f/(1+K)) down
/// to at most 1.
[[nodiscard]] double norm_bound_from_modular(double modular_value);

/// Product bound norm2(f g) <= 2 norm1(f) norm3(g), valid under the triple
/// inequality Phi2(xy) <= Phi1(x) + Phi3(y).
[[nodiscard]] double holder_product_bound(double norm1, double norm3);

}  // namespace orlicz
