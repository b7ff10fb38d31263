#pragma once

#include "orlicz/measure.hpp"
#include "orlicz/operators.hpp"
#include "orlicz/range.hpp"

namespace orlicz {

/// Exponent data for the closed-form L^p criteria, read in the standard
/// norm normalization (the catalog's 1/p factor is scaling and never moves
/// a verdict). The auxiliary exponent depends on the ordering: expanding
/// pairs (p < q) satisfy 1/q + 1/r = 1/p, shrinking pairs (q < p) satisfy
/// 1/p + 1/r = 1/q; both resolve to r = p q / |q - p|.
struct PqConfig {
  double p = 2.0;
  double q = 4.0;
  double r = 4.0;

  /// Validates 1 < p, 1 < q, p != q and derives r; equal exponents have no
  /// auxiliary exponent and are out of scope here.
  [[nodiscard]] static PqConfig make(double p, double q);

  [[nodiscard]] bool expanding() const { return p < q; }
};

/// Closed-form boundedness of M_u between L^p and L^q. Expanding pairs:
/// bounded iff u vanishes a.e. on the interval part and
/// sup_n |u(A_n)|^r / mu(A_n) stabilizes; the certified bound sup^{1/r} is
/// the exact operator norm on the atomic part. Shrinking pairs: bounded iff
/// the integral of |u|^r over both parts converges, with exact norm
/// (integral)^{1/r}. A trend still rising at the budget is Inconclusive.
[[nodiscard]] Verdict mult_pq(const MeasurableFunction& u, const MeasureSpace& space,
                              const PqConfig& cfg, OperatorBudget budget = {});

/// Closed-form boundedness of C_T between L^p and L^q. Expanding pairs:
/// bounded iff the pushforward charges no interval mass and the constant
/// k = sup_n (mu T^{-1})(A_n)^p / mu(A_n)^q stabilizes, with exact norm
/// k^{1/(p q)}; the auxiliary exponent plays no role in this clause and the
/// note records that. Shrinking pairs: bounded iff the integral of
/// f0^{r/q} over both parts converges, with norm (integral)^{1/r}; the
/// singleton-partition sum over the atoms is logged alongside and equals
/// the integral's atom part on purely atomic spaces.
[[nodiscard]] Verdict comp_pq(const Transformation& t, const MeasureSpace& space,
                              const PqConfig& cfg, OperatorBudget budget = {});

/// Closed-form closed-range / finite-rank classification of M_u between
/// L^p and L^q: interval support of positive length rules out closed range
/// (for expanding pairs it already contradicts boundedness, for shrinking
/// pairs the clause itself demands vanishing; the note says which reading
/// applied), and the atom support of u must be finite, judged by the same
/// final-decade stability rule as module range.
[[nodiscard]] RangeReport range_pq(const MeasurableFunction& u, const MeasureSpace& space,
                                   const PqConfig& cfg, RangeBudget budget = {});

/// Composition analogue over the support of the pushforward derivative,
/// with preimage lists filled exactly as in classify_comp.
[[nodiscard]] RangeReport range_pq(const Transformation& t, const MeasureSpace& space,
                                   const PqConfig& cfg, RangeBudget budget = {});

}  // namespace orlicz
