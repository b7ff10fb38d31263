#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz {

/// One atom of the discrete part. `index` is the semantic index: the family
/// parameter n for generated spaces, the position for explicit lists.
struct Atom {
  std::string id;
  double mass = 0.0;
  std::int64_t index = 0;
};

/// Interval part with an optional density against Lebesgue measure (null
/// means density one).
struct ContinuumPart {
  double lo = 0.0;
  double hi = 0.0;
  std::function<double(double)> density;
};

/// A sigma-finite space: a finite or generated list of atoms, plus an
/// optional interval. Generated families materialize up to `budget` atoms;
/// `truncated()` reports whether a tail was left behind, which downstream
/// sum classification treats as an infinite family.
class MeasureSpace {
 public:
  static MeasureSpace atomic(std::vector<Atom> atoms);
  static MeasureSpace generated(std::int64_t n_first, std::int64_t n_last,
                                const std::function<double(std::int64_t)>& mass,
                                std::int64_t budget = 100000);

  [[nodiscard]] MeasureSpace with_continuum(double lo, double hi,
                                            std::function<double(double)> density = {}) const;

  [[nodiscard]] const std::vector<Atom>& atoms() const { return atoms_; }
  [[nodiscard]] std::int64_t planned_atoms() const { return planned_; }
  [[nodiscard]] bool truncated() const {
    return planned_ > static_cast<std::int64_t>(atoms_.size());
  }
  [[nodiscard]] const std::optional<ContinuumPart>& continuum() const { return continuum_; }

  /// Position of an atom id, or -1.
  [[nodiscard]] std::ptrdiff_t position_of(const std::string& id) const;
  /// Position of a semantic index, or -1.
  [[nodiscard]] std::ptrdiff_t position_of_index(std::int64_t index) const;

 private:
  MeasureSpace() = default;

  std::vector<Atom> atoms_;
  std::int64_t planned_ = 0;
  std::optional<ContinuumPart> continuum_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::int64_t, std::size_t> by_index_;
};

/// A function on the space: a rule on atoms plus an optional rule on the
/// interval (absent means identically zero there).
class MeasurableFunction {
 public:
  static MeasurableFunction constant(double c);
  static MeasurableFunction from_map(std::unordered_map<std::string, double> values,
                                     double fallback = 0.0);
  /// Values by atom position in `space`.
  static MeasurableFunction from_values(const MeasureSpace& space, std::vector<double> values);
  /// Rule on the semantic atom index.
  static MeasurableFunction from_formula(std::function<double(std::int64_t)> on_atom);
  /// Rule on whole atoms; the general form behind the other factories.
  static MeasurableFunction from_rule(std::function<double(const Atom&)> on_atom);

  [[nodiscard]] MeasurableFunction with_continuum(std::function<double(double)> on_interval) const;

  [[nodiscard]] double value_on(const Atom& atom) const { return on_atom_(atom); }
  [[nodiscard]] bool has_continuum_part() const { return static_cast<bool>(on_interval_); }
  [[nodiscard]] double on_continuum(double x) const {
    return on_interval_ ? on_interval_(x) : 0.0;
  }

 private:
  MeasurableFunction() = default;

  std::function<double(const Atom&)> on_atom_;
  std::function<double(double)> on_interval_;
};

/// Pointwise image under `op`, applied on both parts.
[[nodiscard]] MeasurableFunction transformed(const MeasurableFunction& f,
                                             std::function<double(double)> op);
/// Pointwise product.
[[nodiscard]] MeasurableFunction product(const MeasurableFunction& f,
                                         const MeasurableFunction& g);

/// A measurable self-map of the space. Atoms map to atoms (by semantic index
/// or by id table); the interval part, when present, carries the forward map
/// together with the density of the pushed-forward measure against the
/// original, which the caller supplies because it is not computable from the
/// forward map alone.
class Transformation {
 public:
  static Transformation from_atom_map(std::function<std::int64_t(std::int64_t)> image_index);
  static Transformation from_atom_table(std::unordered_map<std::string, std::string> image_id);

  [[nodiscard]] Transformation with_interval(
      std::function<double(double)> forward,
      std::function<double(double)> pushforward_density) const;

  /// Position of T(atom) among the materialized atoms of `space`, or -1 when
  /// the image escapes the materialized set.
  [[nodiscard]] std::ptrdiff_t image_position(const MeasureSpace& space, const Atom& atom) const;

  [[nodiscard]] bool has_interval() const { return static_cast<bool>(forward_); }
  [[nodiscard]] double forward(double x) const { return forward_(x); }
  [[nodiscard]] double pushforward_density(double x) const { return density_(x); }

 private:
  Transformation() = default;

  std::function<std::int64_t(std::int64_t)> image_index_;
  std::unordered_map<std::string, std::string> image_id_;
  bool table_mode_ = false;
  std::function<double(double)> forward_;
  std::function<double(double)> density_;
};

/// Atom-part derivative of the pushforward: value at position i is the total
/// mass T sends onto atom i, divided by the atom's own mass. Mass sent
/// outside the materialized atoms is reported in `escaped_mass`.
struct AtomDerivative {
  std::vector<double> values;
  double escaped_mass = 0.0;
};

[[nodiscard]] AtomDerivative radon_nikodym(const MeasureSpace& space, const Transformation& t);

/// Supremum of the pushforward derivative: max over materialized atoms,
/// joined with a 4096-point inclusive scan of the interval density when both
/// sides have an interval part.
[[nodiscard]] double q_t(const MeasureSpace& space, const Transformation& t);

/// Every materialized atom has a preimage among the materialized atoms.
[[nodiscard]] bool surjective_on_atoms(const MeasureSpace& space, const Transformation& t);

struct IntegrationBudget {
  double threshold = 1e12;
  int max_shells = 64;
  double rtol = 1e-9;
};

/// Outcome of integrating a nonnegative integrand. `atom_tail` classifies
/// the atom series: complete enumerations stabilize, truncated families are
/// judged by whether the final decade's increment decays. The interval part
/// converges when dyadic shell contributions toward each endpoint decay; a
/// non-decaying shell sequence or a threshold crossing marks divergence even
/// though the partial value may still be small.
struct IntegralResult {
  double value = 0.0;
  double atom_part = 0.0;
  double continuum_part = 0.0;
  TailClass atom_tail = TailClass::Stabilized;
  bool continuum_converged = true;
  std::int64_t atom_terms = 0;

  [[nodiscard]] bool diverged() const {
    return atom_tail == TailClass::Diverged || !continuum_converged;
  }
  /// Finite and showing no sign of growth at the budget.
  [[nodiscard]] bool settled() const {
    return atom_tail == TailClass::Stabilized && continuum_converged;
  }
};

[[nodiscard]] IntegralResult integrate(const MeasureSpace& space, const MeasurableFunction& f,
                                       IntegrationBudget budget = {});

/// Infimum of sum over blocks of g(nu(B)/mu(B)) mu(B) across all set
/// partitions of the atoms, by exhaustive enumeration (at most 12 atoms).
/// `singleton` is the finest partition's value for comparison.
struct PartitionResult {
  double infimum = 0.0;
  double singleton = 0.0;
  std::vector<int> best_assignment;
};

[[nodiscard]] PartitionResult partition_infimum(const std::vector<double>& atom_masses,
                                                const std::vector<double>& numerator_masses,
                                                const std::function<double(double)>& g);

}  // namespace orlicz
