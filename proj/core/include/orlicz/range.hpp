#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/measure.hpp"
#include "orlicz/operators.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// In this calculus a positive determination collapses the ladder: finite
/// support of the symbol over the atoms is equivalent to closed range and to
/// finite rank, so FiniteRank asserts all three. ClosedRange is reserved for
/// positive closed-range calls made without a finite-rank certificate and is
/// not produced by the classifiers here. NotClosedRange on truncated
/// generators is a trend call recorded against the budget.
enum class RangeClass { FiniteRank, ClosedRange, NotClosedRange, Inconclusive };

[[nodiscard]] const char* to_string(RangeClass c);

enum class RangeRegime { A, B };

enum class OperatorKind { Mult, Comp };

/// Classification evidence. `support_atoms` holds the ids where the symbol
/// (u for M_u, the pushforward derivative for C_T) exceeds the support
/// threshold, in atom order. For compositions, `preimages[i]` lists the
/// source atoms mapping onto `support_atoms[i]`.
struct RangeReport {
  std::vector<std::string> support_atoms;
  std::vector<std::vector<std::string>> preimages;
  bool continuum_vanishes = true;
  RangeClass classification = RangeClass::Inconclusive;
  std::optional<std::size_t> rank_bound;
  std::vector<CriterionEntry> criteria_log;
  std::string note;
};

/// Budgets for support detection. A symbol value above `support_threshold`
/// marks a support atom; `zero_delta`/`min_length`/`scan_points` control the
/// interval vanishing scan exactly as in the operator checks.
struct RangeBudget {
  double support_threshold = 1e-12;
  double zero_delta = 1e-9;
  double min_length = 1e-6;
  int scan_points = 4096;
  IntegrationBudget integration{};
};

/// Closed range / finite rank for M_u. Regime A requires a Delta'
/// certificate for Phi1, the triple bound Phi2(xy) <= Phi1(x) + Phi3(y) and
/// membership u in L^{Phi3}; regime B requires Delta' for Phi2 and
/// membership of 1/u (restricted to the support) in L^{Phi3}. Missing
/// certificates or memberships are refused by name. Decision: interval
/// support of positive length yields NotClosedRange; a complete atom
/// enumeration yields FiniteRank with rank |E|; a truncated generator yields
/// FiniteRank when no support atom appears in the final decade, and
/// NotClosedRange when the support is still growing there.
[[nodiscard]] RangeReport classify_mult(const MeasurableFunction& u, const MeasureSpace& space,
                                        const YoungFunction& phi1, const YoungFunction& phi2,
                                        const YoungFunction& phi3, RangeRegime regime,
                                        RangeBudget budget = {});

/// Closed range / finite rank for C_T via the support of the pushforward
/// derivative. Regime A requires the triple bound Phi2(xy) <= Phi1(x) +
/// Phi3(y) and surjectivity of T on the materialized atoms; regime B
/// requires nabla' and Delta2 certificates for Phi2 (phi3 is unused there).
/// A transformation carrying interval mass yields NotClosedRange; the
/// atom-side decision follows the same stability rule as classify_mult.
[[nodiscard]] RangeReport classify_comp(const Transformation& t, const MeasureSpace& space,
                                        const YoungFunction& phi1, const YoungFunction& phi2,
                                        const YoungFunction& phi3, RangeRegime regime,
                                        RangeBudget budget = {});

/// The indicator basis of the finite-dimensional range: one indicator per
/// support atom for M_u, one indicator of each preimage set for C_T.
/// Refuses reports not classified FiniteRank.
[[nodiscard]] std::vector<MeasurableFunction> finite_rank_span(const RangeReport& report,
                                                               OperatorKind kind);

}  // namespace orlicz
