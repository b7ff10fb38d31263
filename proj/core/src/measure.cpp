#include "orlicz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace orlicz {
namespace {

void check_mass(double mass, const std::string& id) {
  if (!(mass > 0.0) || std::isinf(mass)) {
    throw PreconditionError("atom '" + id + "' must have positive finite mass");
  }
}

}  // namespace

MeasureSpace MeasureSpace::atomic(std::vector<Atom> atoms) {
  MeasureSpace space;
  space.planned_ = static_cast<std::int64_t>(atoms.size());
  space.atoms_ = std::move(atoms);
  for (std::size_t i = 0; i < space.atoms_.size(); ++i) {
    Atom& a = space.atoms_[i];
    check_mass(a.mass, a.id);
    if (!space.by_id_.emplace(a.id, i).second) {
      throw PreconditionError("duplicate atom id '" + a.id + "'");
    }
    space.by_index_.emplace(a.index, i);
  }
  return space;
}

MeasureSpace MeasureSpace::generated(std::int64_t n_first, std::int64_t n_last,
                                     const std::function<double(std::int64_t)>& mass,
                                     std::int64_t budget) {
  if (n_last < n_first) throw PreconditionError("generated family is empty");
  if (budget < 1) throw PreconditionError("materialization budget must be positive");
  if (!mass) throw PreconditionError("generated family needs a mass rule");

  MeasureSpace space;
  space.planned_ = n_last - n_first + 1;
  const std::int64_t count = std::min(space.planned_, budget);
  space.atoms_.reserve(static_cast<std::size_t>(count));
  for (std::int64_t n = n_first; n < n_first + count; ++n) {
    Atom a{"A" + std::to_string(n), mass(n), n};
    check_mass(a.mass, a.id);
    space.by_id_.emplace(a.id, space.atoms_.size());
    space.by_index_.emplace(n, space.atoms_.size());
    space.atoms_.push_back(std::move(a));
  }
  return space;
}

MeasureSpace MeasureSpace::with_continuum(double lo, double hi,
                                          std::function<double(double)> density) const {
  if (!(lo < hi) || std::isinf(lo) || std::isinf(hi)) {
    throw PreconditionError("continuum part needs a bounded interval with lo < hi");
  }
  MeasureSpace out = *this;
  out.continuum_ = ContinuumPart{lo, hi, std::move(density)};
  return out;
}

std::ptrdiff_t MeasureSpace::position_of(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::ptrdiff_t MeasureSpace::position_of_index(std::int64_t index) const {
  const auto it = by_index_.find(index);
  return it == by_index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

MeasurableFunction MeasurableFunction::constant(double c) {
  MeasurableFunction f;
  f.on_atom_ = [c](const Atom&) { return c; };
  f.on_interval_ = [c](double) { return c; };
  return f;
}

MeasurableFunction MeasurableFunction::from_map(std::unordered_map<std::string, double> values,
                                                double fallback) {
  auto table = std::make_shared<const std::unordered_map<std::string, double>>(std::move(values));
  MeasurableFunction f;
  f.on_atom_ = [table, fallback](const Atom& a) {
    const auto it = table->find(a.id);
    return it == table->end() ? fallback : it->second;
  };
  return f;
}

MeasurableFunction MeasurableFunction::from_values(const MeasureSpace& space,
                                                   std::vector<double> values) {
  if (values.size() != space.atoms().size()) {
    throw PreconditionError("value vector length does not match the materialized atoms");
  }
  std::unordered_map<std::string, double> table;
  table.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    table.emplace(space.atoms()[i].id, values[i]);
  }
  return from_map(std::move(table));
}

MeasurableFunction MeasurableFunction::from_formula(std::function<double(std::int64_t)> on_atom) {
  if (!on_atom) throw PreconditionError("formula mode needs an evaluator");
  MeasurableFunction f;
  f.on_atom_ = [fn = std::move(on_atom)](const Atom& a) { return fn(a.index); };
  return f;
}

MeasurableFunction MeasurableFunction::from_rule(std::function<double(const Atom&)> on_atom) {
  if (!on_atom) throw PreconditionError("rule mode needs an evaluator");
  MeasurableFunction f;
  f.on_atom_ = std::move(on_atom);
  return f;
}

MeasurableFunction MeasurableFunction::with_continuum(
    std::function<double(double)> on_interval) const {
  MeasurableFunction out = *this;
  out.on_interval_ = std::move(on_interval);
  return out;
}

MeasurableFunction transformed(const MeasurableFunction& f, std::function<double(double)> op) {
  auto base = std::make_shared<const MeasurableFunction>(f);
  auto fn = std::make_shared<const std::function<double(double)>>(std::move(op));
  auto out = MeasurableFunction::from_rule(
      [base, fn](const Atom& a) { return (*fn)(base->value_on(a)); });
  if (base->has_continuum_part()) {
    out = out.with_continuum([base, fn](double x) { return (*fn)(base->on_continuum(x)); });
  }
  return out;
}

MeasurableFunction product(const MeasurableFunction& f, const MeasurableFunction& g) {
  auto lhs = std::make_shared<const MeasurableFunction>(f);
  auto rhs = std::make_shared<const MeasurableFunction>(g);
  auto out = MeasurableFunction::from_rule(
      [lhs, rhs](const Atom& a) { return lhs->value_on(a) * rhs->value_on(a); });
  if (lhs->has_continuum_part() && rhs->has_continuum_part()) {
    out = out.with_continuum(
        [lhs, rhs](double x) { return lhs->on_continuum(x) * rhs->on_continuum(x); });
  }
  return out;
}

Transformation Transformation::from_atom_map(
    std::function<std::int64_t(std::int64_t)> image_index) {
  if (!image_index) throw PreconditionError("atom map needs an index rule");
  Transformation t;
  t.image_index_ = std::move(image_index);
  return t;
}

Transformation Transformation::from_atom_table(
    std::unordered_map<std::string, std::string> image_id) {
  Transformation t;
  t.image_id_ = std::move(image_id);
  t.table_mode_ = true;
  return t;
}

Transformation Transformation::with_interval(
    std::function<double(double)> forward,
    std::function<double(double)> pushforward_density) const {
  if (!forward || !pushforward_density) {
    throw PreconditionError("interval transformation needs both the map and its density");
  }
  Transformation out = *this;
  out.forward_ = std::move(forward);
  out.density_ = std::move(pushforward_density);
  return out;
}

std::ptrdiff_t Transformation::image_position(const MeasureSpace& space, const Atom& atom) const {
  if (table_mode_) {
    const auto it = image_id_.find(atom.id);
    if (it == image_id_.end()) {
      throw PreconditionError("atom '" + atom.id + "' has no image in the table");
    }
    return space.position_of(it->second);
  }
  return space.position_of_index(image_index_(atom.index));
}

AtomDerivative radon_nikodym(const MeasureSpace& space, const Transformation& t) {
  const auto& atoms = space.atoms();
  AtomDerivative out;
  out.values.assign(atoms.size(), 0.0);
  for (const Atom& a : atoms) {
    const std::ptrdiff_t pos = t.image_position(space, a);
    if (pos < 0) {
      out.escaped_mass += a.mass;
    } else {
      out.values[static_cast<std::size_t>(pos)] += a.mass;
    }
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    out.values[i] /= atoms[i].mass;
  }
  return out;
}

double q_t(const MeasureSpace& space, const Transformation& t) {
  double sup = 0.0;
  if (!space.atoms().empty()) {
    const AtomDerivative d = radon_nikodym(space, t);
    for (double v : d.values) sup = std::max(sup, v);
  }
  if (space.continuum() && t.has_interval()) {
    const auto& c = *space.continuum();
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
      const double x = c.lo + (c.hi - c.lo) * i / n;
      sup = std::max(sup, t.pushforward_density(x));
    }
  }
  return sup;
}

bool surjective_on_atoms(const MeasureSpace& space, const Transformation& t) {
  std::vector<bool> hit(space.atoms().size(), false);
  for (const Atom& a : space.atoms()) {
    const std::ptrdiff_t pos = t.image_position(space, a);
    if (pos >= 0) hit[static_cast<std::size_t>(pos)] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

namespace {

double simpson_slice(const std::function<double(double)>& g, double a, double fa, double b,
                     double fb, double fm, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double sum = left + right;
  if (!std::isfinite(sum)) return sum;
  if (depth <= 0 || std::abs(sum - whole) <= 15.0 * eps) {
    return sum + (sum - whole) / 15.0;
  }
  return simpson_slice(g, a, fa, m, fm, flm, left, eps * 0.5, depth - 1) +
         simpson_slice(g, m, fm, b, fb, frm, right, eps * 0.5, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double rel) {
  const double fa = g(a);
  const double fb = g(b);
  const double m = 0.5 * (a + b);
  const double fm = g(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  if (!std::isfinite(whole)) return whole;
  const double eps = rel * std::max(1.0, std::abs(whole));
  return simpson_slice(g, a, fa, b, fb, fm, whole, eps, 24);
}

// Integrates g over the half-interval between `edge` (a potential
// singularity, never evaluated) and `inner`, by dyadic shells toward the
// edge. Sets `converged` false on a non-decaying shell sequence, a threshold
// crossing, or a shell budget exhausted before the contributions died down.
double shell_integral(const std::function<double(double)>& g, double edge, double inner,
                      const IntegrationBudget& budget, double already, bool& converged) {
  double total = 0.0;
  double prev_shell = kInf;
  bool decaying = true;
  int flat_streak = 0;
  int decayed_streak = 0;
  for (int k = 0; k < budget.max_shells; ++k) {
    const double far = edge + (inner - edge) * std::ldexp(1.0, -k);
    const double near = edge + (inner - edge) * std::ldexp(1.0, -k - 1);
    if (near == edge || near == far) {
      // No representable points left between the shell and the edge. The
      // geometric tail beyond is on the order of the last shell; accept if
      // the shells were genuinely decaying and already negligible.
      const double scale = std::max({1.0, std::abs(total), already});
      converged = decaying && std::abs(prev_shell) <= std::sqrt(budget.rtol) * scale;
      return total;
    }
    const double s =
        adaptive_simpson(g, std::min(near, far), std::max(near, far), budget.rtol * 0.01);
    if (!std::isfinite(s)) {
      converged = false;
      return kInf;
    }
    total += s;
    if (std::abs(total) + already > budget.threshold) {
      converged = false;
      return total;
    }
    decaying = std::abs(s) <= 0.999 * std::abs(prev_shell);
    const double scale = std::max({1.0, std::abs(total), already});
    // Small alone is not enough: a flat or growing shell sequence, however
    // small, is marching toward an edge blowup, so the decay exit demands a
    // strictly shrinking sequence.
    if (decaying && std::abs(s) <= budget.rtol * scale) {
      ++decayed_streak;
      if (decayed_streak >= 2) return total;
    } else {
      decayed_streak = 0;
    }
    // 1/x contributes the same amount at every dyadic scale; no decay over
    // a long stretch of visible shells is the divergence signature.
    flat_streak = !decaying ? flat_streak + 1 : 0;
    if (flat_streak >= 8 && std::abs(s) > budget.rtol * scale) {
      converged = false;
      return total;
    }
    prev_shell = s;
  }
  converged = false;  // budget exhausted before the shells died down
  return total;
}

}  // namespace

IntegralResult integrate(const MeasureSpace& space, const MeasurableFunction& f,
                         IntegrationBudget budget) {
  IntegralResult result;
  const auto& atoms = space.atoms();
  SumProbe probe(static_cast<std::int64_t>(atoms.size()), budget.threshold);
  for (const Atom& a : atoms) {
    probe.add(f.value_on(a) * a.mass);
  }
  result.atom_part = probe.value();
  result.atom_terms = static_cast<std::int64_t>(atoms.size());
  result.atom_tail = probe.classify();
  if (!space.truncated() && result.atom_tail == TailClass::Growing) {
    // A complete enumeration is an exact finite sum; growth of the last
    // decade is irrelevant.
    result.atom_tail = TailClass::Stabilized;
  }

  if (space.continuum() && f.has_continuum_part()) {
    const ContinuumPart& c = *space.continuum();
    const auto g = [&](double x) {
      const double v = f.on_continuum(x);
      return c.density ? v * c.density(x) : v;
    };
    const double mid = 0.5 * (c.lo + c.hi);
    bool left_ok = true;
    bool right_ok = true;
    const double already = std::isinf(result.atom_part) ? budget.threshold : result.atom_part;
    const double left = shell_integral(g, c.lo, mid, budget, already, left_ok);
    const double right =
        shell_integral(g, c.hi, mid, budget, std::abs(left) + already, right_ok);
    result.continuum_part = left + right;
    result.continuum_converged = left_ok && right_ok;
  }

  result.value = result.atom_part + result.continuum_part;
  return result;
}

PartitionResult partition_infimum(const std::vector<double>& atom_masses,
                                  const std::vector<double>& numerator_masses,
                                  const std::function<double(double)>& g) {
  const std::size_t n = atom_masses.size();
  if (numerator_masses.size() != n) {
    throw PreconditionError("numerator mass list must match the atom list");
  }
  if (n > 12) {
    throw PreconditionError("partition enumeration is capped at 12 atoms");
  }
  PartitionResult out;
  if (n == 0) return out;

  const auto value_of = [&](const std::vector<int>& assignment, int blocks) {
    std::vector<double> mu(static_cast<std::size_t>(blocks), 0.0);
    std::vector<double> nu(static_cast<std::size_t>(blocks), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      mu[static_cast<std::size_t>(assignment[i])] += atom_masses[i];
      nu[static_cast<std::size_t>(assignment[i])] += numerator_masses[i];
    }
    double v = 0.0;
    for (int b = 0; b < blocks; ++b) {
      const std::size_t ub = static_cast<std::size_t>(b);
      v += g(nu[ub] / mu[ub]) * mu[ub];
    }
    return v;
  };

  std::vector<int> singleton(n);
  for (std::size_t i = 0; i < n; ++i) singleton[i] = static_cast<int>(i);
  out.singleton = value_of(singleton, static_cast<int>(n));
  out.infimum = out.singleton;
  out.best_assignment = singleton;

  // Restricted growth strings enumerate every set partition exactly once.
  std::vector<int> a(n, 0);
  std::vector<int> mx(n, 0);
  while (true) {
    const int blocks = mx[n - 1] + 1;
    const double v = value_of(a, blocks);
    if (v < out.infimum) {
      out.infimum = v;
      out.best_assignment = a;
    }
    std::size_t i = n - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
  return out;
}

}  // namespace orlicz
