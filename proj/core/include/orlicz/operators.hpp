#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orlicz/measure.hpp"
#include "orlicz/orlicz_space.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// Three-state outcome. The boundedness criteria are one-directional, so a
/// sufficient check that fails reports Inconclusive, never Refuted, and a
/// necessary check that passes reports Inconclusive, never Certified.
enum class Status { Certified, Refuted, Inconclusive };

[[nodiscard]] const char* to_string(Status s);

/// One recomputable line of evidence: a named criterion, its outcome, and
/// the number it produced.
struct CriterionEntry {
  std::string name;
  std::string outcome;
  double value = 0.0;
};

/// Structured evidence for a Refuted verdict: a violating atom, a violating
/// sub-interval, or a divergence trace of partial sums or maxima.
struct Witness {
  std::string kind;
  std::string detail;
  std::optional<std::string> atom_id;
  std::optional<double> interval_lo;
  std::optional<double> interval_hi;
  std::vector<double> trace;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<double> bound;
  std::optional<Witness> witness;
  std::vector<CriterionEntry> criteria_log;
  std::string note;
};

/// Budgets for the criteria scans. `zero_delta` and `min_length` control the
/// almost-everywhere-zero test on the interval part: values above the delta
/// on a total scanned length of at least `min_length` refute vanishing.
/// `threshold` bounds partial sums and partial maxima; a crossing while the
/// sequence is still rising at the atom budget marks divergence.
struct OperatorBudget {
  double threshold = 1e12;
  double zero_delta = 1e-9;
  double min_length = 1e-6;
  int scan_points = 4096;
  IntegrationBudget integration{};
};

/// Pointwise product u f on both parts.
[[nodiscard]] MeasurableFunction apply_mult(const MeasurableFunction& u,
                                            const MeasurableFunction& f);

/// f composed with the atom map of t: the value at A becomes f(T(A)).
/// Atoms whose image escapes the materialized family contribute value 0.
/// Interval-part composition is refused: the transformation's interval
/// behavior enters criteria only through its pushforward density.
[[nodiscard]] MeasurableFunction apply_comp(const Transformation& t, const MeasurableFunction& f,
                                            const MeasureSpace& space);

/// Sufficient boundedness of M_u from the product bound: requires
/// Phi2(xy) <= Phi1(x) + Phi3(y) on the grid, then a finite Luxemburg norm
/// of u under Phi3 certifies the operator with bound 2 ||u||_{Phi3}. A
/// diverged norm leaves the verdict Inconclusive.
[[nodiscard]] Verdict mult_bounded_sufficient(const MeasurableFunction& u,
                                              const MeasureSpace& space,
                                              const YoungFunction& phi1,
                                              const YoungFunction& phi2,
                                              const YoungFunction& phi3,
                                              OperatorBudget budget = {});

/// Necessary conditions for boundedness of M_u: u must vanish a.e. on the
/// interval part, and the partial maxima of |u(A_n)| Phi3^{-1}(1/mu(A_n))
/// must not diverge. Either failure refutes; otherwise the computed sup is
/// logged and the verdict stays Inconclusive. `direction` selects which
/// reading of the triple-inequality hypothesis is certified as the
/// precondition; the verdict note records the choice.
[[nodiscard]] Verdict mult_necessary_atomic(const MeasurableFunction& u,
                                            const MeasureSpace& space,
                                            const YoungFunction& phi1,
                                            const YoungFunction& phi2,
                                            const YoungFunction& phi3,
                                            TripleDirection direction = TripleDirection::Phi1Left,
                                            OperatorBudget budget = {});

/// Sufficient boundedness of M_u on the atomic part: with Delta' constants
/// c for Phi1 and b for Phi2 and M = sup_n Phi2[u(A_n)/Phi1^{-1}(mu(A_n))]
/// mu(A_n), a stabilized M certifies the bound b M (Phi2 o Phi1^{-1})(c) + 1.
/// Requires u = 0 a.e. on the interval part and Phi2 o Phi1^{-1} to pass the
/// Young-function grid checks.
[[nodiscard]] Verdict mult_bounded_sufficient_atomic(const MeasurableFunction& u,
                                                     const MeasureSpace& space,
                                                     const YoungFunction& phi1,
                                                     const YoungFunction& phi2,
                                                     OperatorBudget budget = {});

/// Consistency requirement attached to boundedness evidence: membership of u
/// in the Orlicz class of the gauge Psi3(Psi1(.)), where Psi_i conjugates
/// phi_i and Psi3 conjugates Psi2 o Psi1^{-1}. Requires a Delta' certificate
/// for Phi1 and a valid composed gauge. When `phi3_override` is supplied it
/// replaces the numerically composed Psi2 o Psi1^{-1} after the same grid
/// validation. Certified = member, Refuted = excluded with the divergence
/// trace, Inconclusive = probes did not settle.
[[nodiscard]] Verdict mult_dual_membership(const MeasurableFunction& u,
                                           const MeasureSpace& space,
                                           const YoungFunction& phi1,
                                           const YoungFunction& phi2,
                                           const std::optional<YoungFunction>& phi3_override = {},
                                           OperatorBudget budget = {});

/// Trace of a constructed witness function: levels x_n on pieces of the
/// interval part with the recorded masses, plus partial sums of the two
/// modulars at checkpoint truncations.
struct ConstructedWitness {
  MeasurableFunction f = MeasurableFunction::constant(0.0);
  std::vector<double> levels;
  std::vector<double> piece_masses;
  std::vector<std::size_t> checkpoints;
  std::vector<double> phi1_partials;
  std::vector<double> phi2_partials;
  double phi1_bound = 0.0;
  bool phi2_increasing = false;
  std::size_t terms = 0;
  std::string note;
};

struct NonexistenceReport {
  Verdict verdict;
  std::optional<ConstructedWitness> witness;
};

/// On a space with an interval part and Phi2 not dominated by Phi1, emits
/// the witness scheme refuting every non-zero bounded weighted composition
/// M_u C_T: levels y_n with Phi2(y_n) > Phi1(2^n n^3 y_n), masses
/// mu(F_n) = Phi1(y_1) mu(F) / (2^n Phi1(n^3 y_n)), f = sum n^2 y_n on F_n.
/// The Phi1-modular partial sums stay bounded while the Phi2 side grows past
/// ten times that bound; a failed level search reports Inconclusive.
[[nodiscard]] NonexistenceReport nonatomic_nonexistence(const YoungFunction& phi1,
                                                        const YoungFunction& phi2,
                                                        const MeasureSpace& space,
                                                        OperatorBudget budget = {});

/// The escape construction on a sub-interval E of the interval part: levels
/// x_n with Phi2(x_n) > Phi1(n x_n), masses mu(F_n) = (n0+n+1)^{-2} and
/// mu(E_n) = mu(F_n)/Phi1(x_n), f = sum x_n on E_n. The function lies in the
/// Phi1 class while its Phi2-modular partial sums over E diverge. Requires
/// Phi2 not dominated by Phi1, a Delta2 certificate for Phi2, positive
/// length, and unit density on the interval part.
[[nodiscard]] ConstructedWitness escape_witness(const YoungFunction& phi1,
                                                const YoungFunction& phi2,
                                                const MeasureSpace& space, double lo, double hi,
                                                OperatorBudget budget = {});

/// Necessary conditions for boundedness of C_T: the pushforward derivative
/// must vanish a.e. on the interval part and the partial maxima of
/// Phi1^{-1}(1/mu(A_n)) / Phi2^{-1}(1/(f0(A_n) mu(A_n))) must not diverge
/// (atoms with f0 = 0 contribute ratio 0). Requires Phi2 not dominated by
/// Phi1.
[[nodiscard]] Verdict comp_necessary(const Transformation& t, const MeasureSpace& space,
                                     const YoungFunction& phi1, const YoungFunction& phi2,
                                     OperatorBudget budget = {});

/// Sufficient boundedness of C_T on the atomic part, the composition
/// analogue of mult_bounded_sufficient_atomic with
/// M = sup_n Phi2[1/Phi1^{-1}(mu(A_n))] f0(A_n) mu(A_n).
[[nodiscard]] Verdict comp_sufficient_atomic(const Transformation& t, const MeasureSpace& space,
                                             const YoungFunction& phi1,
                                             const YoungFunction& phi2,
                                             OperatorBudget budget = {});

/// The condition chain for C_T under Phi1(xy) <= Phi2(x) + Phi3(y) and a
/// Delta' certificate for Phi2. Condition (ii): the pushforward charges no
/// interval mass and sup_n Phi1^{-1}(1/mu(A_n)) / Phi2^{-1}(1/(mu T^{-1})(A_n))
/// is finite. Condition (iii): f0 vanishes a.e. on the interval part and
/// sup_n f0(A_n) Phi2(Phi3^{-1}(1/mu(A_n))) is finite. `implication_ok`
/// asserts that (ii) was never observed to hold without (iii).
struct ChainReport {
  bool cond_ii = false;
  bool cond_iii = false;
  double sup_ii = 0.0;
  double sup_iii = 0.0;
  bool implication_ok = true;
  std::vector<CriterionEntry> criteria_log;
  std::string note;
};

[[nodiscard]] ChainReport comp_condition_chain(const Transformation& t, const MeasureSpace& space,
                                               const YoungFunction& phi1,
                                               const YoungFunction& phi2,
                                               const YoungFunction& phi3,
                                               OperatorBudget budget = {});

/// Norm sandwich between C_T f and M_{Phi2^{-1}(f0)} f: the first inequality
/// ||C_T f|| <= b ||M f|| uses the nabla' constant of Phi2, the second
/// ||M f|| <= c ||C_T f|| its Delta' constant. A missing certificate leaves
/// the corresponding check unset; `holds` is the conjunction of whichever
/// checks ran.
struct SandwichReport {
  double ct_norm = 0.0;
  double mult_norm = 0.0;
  std::optional<double> b;
  std::optional<double> c;
  std::optional<bool> first_holds;
  std::optional<bool> second_holds;
  bool holds = true;
  std::vector<CriterionEntry> criteria_log;
};

[[nodiscard]] SandwichReport comp_mult_sandwich(const Transformation& t,
                                                const MeasurableFunction& f,
                                                const MeasureSpace& space,
                                                const YoungFunction& phi1,
                                                const YoungFunction& phi2,
                                                OperatorBudget budget = {});

/// Consistency requirement for C_T: membership of f0 under the gauge
/// Psi3(Psi1(Phi2^{-1}(.))), built from the same conjugate calculus as
/// mult_dual_membership. Requires a Delta' certificate for Phi2.
[[nodiscard]] Verdict comp_dual_membership(const Transformation& t, const MeasureSpace& space,
                                           const YoungFunction& phi1, const YoungFunction& phi2,
                                           const std::optional<YoungFunction>& phi3_override = {},
                                           OperatorBudget budget = {});

}  // namespace orlicz
