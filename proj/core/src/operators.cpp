#include "orlicz/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

const char* tail_name(TailClass t) {
  switch (t) {
    case TailClass::Stabilized: return "stabilized";
    case TailClass::Growing: return "growing";
    default: return "diverged";
  }
}

struct IntervalScan {
  bool scanned = false;
  double violating_length = 0.0;
  double run_lo = 0.0;
  double run_hi = 0.0;
  double max_value = 0.0;
};

// Midpoint scan of the interval part; endpoint singularities are never
// evaluated. Reports the total cell length where |v| exceeds the delta and
// the longest contiguous violating run.
template <typename F>
IntervalScan scan_interval(const MeasureSpace& space, F&& v, const OperatorBudget& budget) {
  IntervalScan out;
  const auto& cont = space.continuum();
  if (!cont) return out;
  out.scanned = true;
  const int n = std::max(16, budget.scan_points);
  const double width = (cont->hi - cont->lo) / n;
  double best = 0.0;
  double run_start = 0.0;
  int run_cells = 0;
  for (int i = 0; i < n; ++i) {
    const double x = cont->lo + (i + 0.5) * width;
    const double val = std::abs(v(x));
    out.max_value = std::max(out.max_value, val);
    if (val > budget.zero_delta) {
      if (run_cells == 0) run_start = cont->lo + i * width;
      ++run_cells;
      out.violating_length += width;
      if (run_cells * width > best) {
        best = run_cells * width;
        out.run_lo = run_start;
        out.run_hi = cont->lo + (i + 1) * width;
      }
    } else {
      run_cells = 0;
    }
  }
  return out;
}

struct SupScan {
  double sup = 0.0;
  TailClass tail = TailClass::Stabilized;
  std::vector<double> trace;
  std::string arg_id;
};

// Running maxima over the materialized atoms. A family that is not
// truncated is a complete enumeration, so its maximum is an exact finite
// number and never counts as divergent.
template <typename F>
SupScan scan_sup(const MeasureSpace& space, F&& per_atom, const OperatorBudget& budget) {
  const auto& atoms = space.atoms();
  SupProbe probe(static_cast<std::int64_t>(atoms.size()), budget.threshold);
  SupScan out;
  for (const auto& a : atoms) {
    const double v = per_atom(a);
    if (v > out.sup) {
      out.sup = v;
      out.arg_id = a.id;
    }
    probe.add(v);
  }
  out.sup = probe.sup();
  out.tail = probe.classify();
  // An infinite criterion value is a genuine divergence even on a complete
  // enumeration; a finite maximum over a complete enumeration never is.
  if (std::isinf(out.sup)) {
    out.tail = TailClass::Diverged;
  } else if (!space.truncated()) {
    out.tail = TailClass::Stabilized;
  }
  out.trace = probe.trace();
  return out;
}

Witness interval_witness(const IntervalScan& scan, const std::string& what) {
  Witness w;
  w.kind = "interval_support";
  w.detail = what + " exceeds the zero delta on a sub-interval of positive length";
  w.interval_lo = scan.run_lo;
  w.interval_hi = scan.run_hi;
  w.trace = {scan.violating_length, scan.max_value};
  return w;
}

Witness sup_witness(const SupScan& scan, const std::string& what) {
  Witness w;
  w.kind = "sup_divergence";
  w.detail = what + " partial maxima crossed the threshold and were still rising at the budget";
  w.atom_id = scan.arg_id;
  w.trace = scan.trace;
  return w;
}

// f0 on the interval part: the user-supplied pushforward density, or zero
// when the transformation carries no interval behavior.
double interval_f0(const Transformation& t, double x) {
  return t.has_interval() ? t.pushforward_density(x) : 0.0;
}

void require_vanishing_interval(const MeasureSpace& space, const IntervalScan& scan,
                                const char* who, const char* what) {
  if (scan.scanned && scan.violating_length >= 1e-6) {
    std::ostringstream msg;
    msg << who << ": " << what << " must vanish a.e. on the interval part; it exceeds the "
        << "delta on length " << scan.violating_length;
    throw PreconditionError(msg.str());
  }
  (void)space;
}

GrowthCertificate require_delta_prime(const YoungFunction& phi, const char* who,
                                      const char* role) {
  auto cert = check_growth(phi, GrowthCondition::DeltaPrime);
  if (!cert.holds) {
    std::ostringstream msg;
    msg << who << ": missing Delta' certificate for " << role << " (" << phi.name() << ")";
    throw PreconditionError(msg.str());
  }
  return cert;
}

// Level search in log space: smallest t >= start on the step ladder with
// phi2.log_value(t) > phi1.log_value(t + shift). The ladder spans a 2^64
// factor above the start; exhausting it reports failure via the optional.
std::optional<double> search_level(const YoungFunction& phi1, const YoungFunction& phi2,
                                   double start_t, double shift) {
  const double step = std::log(1.05);
  const double cap = start_t + 64.0 * std::log(2.0);
  for (double t = start_t; t <= cap; t += step) {
    const double lhs = phi2.log_value(t);
    const double rhs = phi1.log_value(t + shift);
    if (std::isinf(lhs) && lhs > 0.0) {
      if (!(std::isinf(rhs) && rhs > 0.0)) return t;
      continue;
    }
    if (lhs > rhs) return t;
  }
  return std::nullopt;
}

const std::vector<std::size_t> kWitnessCheckpoints = {100, 1000, 10000};

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Certified: return "Certified";
    case Status::Refuted: return "Refuted";
    default: return "Inconclusive";
  }
}

MeasurableFunction apply_mult(const MeasurableFunction& u, const MeasurableFunction& f) {
  return product(u, f);
}

MeasurableFunction apply_comp(const Transformation& t, const MeasurableFunction& f,
                              const MeasureSpace& space) {
  if (t.has_interval()) {
    throw PreconditionError(
        "apply_comp: interval-part composition is not supported; the transformation's interval "
        "behavior enters only through its pushforward density");
  }
  auto atoms = std::make_shared<std::vector<Atom>>(space.atoms());
  auto tt = std::make_shared<Transformation>(t);
  auto ff = std::make_shared<MeasurableFunction>(f);
  auto sp = std::make_shared<MeasureSpace>(space);
  return MeasurableFunction::from_rule([atoms, tt, ff, sp](const Atom& a) {
    const std::ptrdiff_t pos = tt->image_position(*sp, a);
    return pos >= 0 ? ff->value_on((*atoms)[static_cast<std::size_t>(pos)]) : 0.0;
  });
}

Verdict mult_bounded_sufficient(const MeasurableFunction& u, const MeasureSpace& space,
                                const YoungFunction& phi1, const YoungFunction& phi2,
                                const YoungFunction& phi3, OperatorBudget budget) {
  const auto triple = check_triple_inequality(phi1, phi2, phi3, TripleDirection::Phi2Left);
  if (!triple.holds) {
    throw PreconditionError(
        "mult_bounded_sufficient: the product bound needs Phi2(xy) <= Phi1(x) + Phi3(y); the "
        "grid rejects it");
  }
  Verdict v;
  v.criteria_log.push_back({"triple_inequality_phi2_left", "holds", 0.0});
  const auto norm = luxemburg_norm(phi3, u, space, 1e-9, budget.integration);
  if (norm.diverged) {
    v.criteria_log.push_back({"phi3_norm", "diverged", 0.0});
    v.status = Status::Inconclusive;
    v.note = "sufficiency only: a diverged Phi3 norm certifies nothing";
    return v;
  }
  v.criteria_log.push_back({"phi3_norm", "finite", norm.value});
  v.status = Status::Certified;
  v.bound = 2.0 * norm.value;
  return v;
}

Verdict mult_necessary_atomic(const MeasurableFunction& u, const MeasureSpace& space,
                              const YoungFunction& phi1, const YoungFunction& phi2,
                              const YoungFunction& phi3, TripleDirection direction,
                              OperatorBudget budget) {
  const auto triple = check_triple_inequality(phi1, phi2, phi3, direction);
  if (!triple.holds) {
    throw PreconditionError(
        "mult_necessary_atomic: the requested triple-inequality reading fails on the grid");
  }
  Verdict v;
  v.note = direction == TripleDirection::Phi1Left
               ? "hypothesis read as Phi1(xy) <= Phi2(x) + Phi3(y)"
               : "hypothesis read as Phi2(xy) <= Phi1(x) + Phi3(y)";
  v.criteria_log.push_back({"triple_inequality", "holds", 0.0});

  const auto scan = scan_interval(space, [&](double x) { return u.on_continuum(x); }, budget);
  if (scan.scanned) {
    if (scan.violating_length >= budget.min_length) {
      v.criteria_log.push_back({"interval_vanishing", "fails", scan.violating_length});
      v.status = Status::Refuted;
      v.witness = interval_witness(scan, "u");
      return v;
    }
    v.criteria_log.push_back({"interval_vanishing", "holds", scan.max_value});
  }

  const auto sup = scan_sup(
      space,
      [&](const Atom& a) {
        return std::abs(u.value_on(a)) * inverse(phi3, 1.0 / a.mass);
      },
      budget);
  v.criteria_log.push_back({"atom_sup", tail_name(sup.tail), sup.sup});
  if (sup.tail == TailClass::Diverged) {
    v.status = Status::Refuted;
    v.witness = sup_witness(sup, "|u(A_n)| Phi3^{-1}(1/mu(A_n))");
    return v;
  }
  v.status = Status::Inconclusive;
  v.note += "; necessary conditions pass, which certifies nothing by itself";
  return v;
}

Verdict mult_bounded_sufficient_atomic(const MeasurableFunction& u, const MeasureSpace& space,
                                       const YoungFunction& phi1, const YoungFunction& phi2,
                                       OperatorBudget budget) {
  const auto scan = scan_interval(space, [&](double x) { return u.on_continuum(x); }, budget);
  require_vanishing_interval(space, scan, "mult_bounded_sufficient_atomic", "u");
  const auto c1 = require_delta_prime(phi1, "mult_bounded_sufficient_atomic", "Phi1");
  const auto c2 = require_delta_prime(phi2, "mult_bounded_sufficient_atomic", "Phi2");
  // The summation step of the certified bound needs superadditivity of the
  // composite, so it must be a Young function; shrinking pairs (concave
  // composite) are refused rather than silently mis-certified.
  const auto composed = compose_with_inverse(phi2, phi1);
  const auto validity = validate_young(composed);
  if (!validity.valid) {
    throw PreconditionError("mult_bounded_sufficient_atomic: Phi2 o Phi1^{-1} fails the "
                            "Young-function grid checks: " +
                            validity.failure);
  }

  Verdict v;
  v.criteria_log.push_back({"delta_prime_phi1", "holds", c1.constant});
  v.criteria_log.push_back({"delta_prime_phi2", "holds", c2.constant});
  v.criteria_log.push_back({"composite_young", "valid", 0.0});

  const auto sup = scan_sup(
      space,
      [&](const Atom& a) {
        const double denom = inverse(phi1, a.mass);
        const double ratio = denom > 0.0 ? std::abs(u.value_on(a)) / denom : kInf;
        return phi2(ratio) * a.mass;
      },
      budget);
  v.criteria_log.push_back({"atom_sup_M", tail_name(sup.tail), sup.sup});
  if (sup.tail == TailClass::Stabilized && std::isfinite(sup.sup)) {
    v.status = Status::Certified;
    v.bound = c2.constant * sup.sup * composed(c1.constant) + 1.0;
    return v;
  }
  v.status = Status::Inconclusive;
  v.note = "the partial maxima did not stabilize under the budget; sufficiency cannot refute";
  return v;
}

Verdict mult_dual_membership(const MeasurableFunction& u, const MeasureSpace& space,
                             const YoungFunction& phi1, const YoungFunction& phi2,
                             const std::optional<YoungFunction>& phi3_override,
                             OperatorBudget budget) {
  require_delta_prime(phi1, "mult_dual_membership", "Phi1");

  Verdict v;
  YoungFunction gauge = YoungFunction::power(2.0);
  if (phi3_override) {
    const auto validity = validate_young(*phi3_override);
    if (!validity.valid) {
      throw PreconditionError("mult_dual_membership: the supplied Phi3 fails the Young-function "
                              "grid checks: " +
                              validity.failure);
    }
    auto psi1 = std::make_shared<YoungFunction>(conjugate_function(phi1));
    auto psi3 = std::make_shared<YoungFunction>(conjugate_function(*phi3_override));
    gauge = YoungFunction::custom("psi3(psi1(.))", [psi1, psi3](double y) {
      return (*psi3)((*psi1)(y));
    });
    v.criteria_log.push_back({"phi3", "supplied", 0.0});
  } else {
    const auto psi1 = conjugate_function(phi1);
    const auto psi2 = conjugate_function(phi2);
    const auto phi3 = compose_with_inverse(psi2, psi1);
    const auto validity = validate_young(phi3);
    if (!validity.valid) {
      throw PreconditionError("mult_dual_membership: Psi2 o Psi1^{-1} fails the Young-function "
                              "grid checks: " +
                              validity.failure);
    }
    gauge = dual_composite(phi1, phi2);
    v.criteria_log.push_back({"phi3", "composed", 0.0});
  }

  const auto mem = member(gauge, u, space, budget.integration);
  if (mem.finite) {
    v.status = Status::Certified;
    v.bound = mem.at_scale.value;
    v.criteria_log.push_back({"membership", "member", mem.scale});
    v.note = "u lies in the dual-composite class, as boundedness evidence requires";
    return v;
  }
  if (mem.at_scale.diverged() || mem.at_scale.atom_tail == TailClass::Growing) {
    v.status = Status::Refuted;
    Witness w;
    w.kind = "modular_divergence";
    w.detail = "the dual-composite modular diverges at every scanned scale";
    w.trace = {mem.scale, mem.at_scale.value};
    v.witness = w;
    v.criteria_log.push_back({"membership", "excluded", mem.scale});
    return v;
  }
  v.status = Status::Inconclusive;
  v.criteria_log.push_back({"membership", "unsettled", mem.scale});
  return v;
}

NonexistenceReport nonatomic_nonexistence(const YoungFunction& phi1, const YoungFunction& phi2,
                                          const MeasureSpace& space, OperatorBudget budget) {
  const auto& cont = space.continuum();
  if (!cont) {
    throw PreconditionError("nonatomic_nonexistence: the construction needs an interval part");
  }
  if (cont->density) {
    throw PreconditionError(
        "nonatomic_nonexistence: interval packing is only implemented for unit density");
  }
  const auto dom = dominates(phi1, phi2);
  if (dom.holds) {
    throw PreconditionError("nonatomic_nonexistence: Phi2 is dominated by Phi1 on the grid, so "
                            "the level search cannot succeed");
  }

  NonexistenceReport out;
  out.verdict.criteria_log.push_back({"domination_phi2_by_phi1", "fails", dom.a});

  const double mu_f = cont->hi - cont->lo;
  const std::size_t terms = 10000;
  ConstructedWitness w;
  w.checkpoints = kWitnessCheckpoints;
  w.note = "levels y_n with Phi2(y_n) > Phi1(2^n n^3 y_n); f = sum n^2 y_n on F_n";

  // Levels in log space; masses via log_value so that 2^n never overflows.
  std::vector<double> log_y;
  log_y.reserve(terms);
  double t = std::log(std::max(inverse(phi1, 1.0), 1e-6));
  const double bump = std::log(1.0 + 1e-6);
  for (std::size_t n = 1; n <= terms; ++n) {
    const double shift = static_cast<double>(n) * std::log(2.0) + 3.0 * std::log(double(n));
    const auto found = search_level(phi1, phi2, t + bump, shift);
    if (!found) {
      out.verdict.status = Status::Inconclusive;
      out.verdict.note = "level search exhausted its ladder at n = " + std::to_string(n);
      out.verdict.criteria_log.push_back({"level_search", "failed", double(n)});
      return out;
    }
    t = *found;
    log_y.push_back(t);
  }
  out.verdict.criteria_log.push_back({"level_search", "complete", double(terms)});

  const double log_phi1_y1 = phi1.log_value(log_y.front());
  double s1 = 0.0;
  double s2 = 0.0;
  bool s2_increasing = true;
  std::vector<std::pair<double, double>> pieces;  // (mass, level) for the evaluator
  for (std::size_t n = 1; n <= terms; ++n) {
    const double ln_n = std::log(double(n));
    const double log_mass = log_phi1_y1 + std::log(mu_f) - double(n) * std::log(2.0) -
                            phi1.log_value(3.0 * ln_n + log_y[n - 1]);
    const double log_level = 2.0 * ln_n + log_y[n - 1];
    const double term1 = std::exp(phi1.log_value(log_level) + log_mass);
    const double term2 = std::exp(-ln_n + phi2.log_value(log_y[n - 1]) + log_mass);
    s1 += term1;
    if (!(term2 > 0.0)) s2_increasing = false;
    s2 += term2;
    w.levels.push_back(std::exp(log_level));
    w.piece_masses.push_back(std::exp(log_mass));
    pieces.emplace_back(std::exp(log_mass), std::exp(log_level));
    if (std::find(w.checkpoints.begin(), w.checkpoints.end(), n) != w.checkpoints.end()) {
      w.phi1_partials.push_back(s1);
      w.phi2_partials.push_back(s2);
    }
  }
  w.terms = terms;
  w.phi1_bound = s1;
  w.phi2_increasing = s2_increasing;

  // Pack the pieces left to right inside the interval part.
  auto starts = std::make_shared<std::vector<double>>();
  auto ends = std::make_shared<std::vector<double>>();
  auto values = std::make_shared<std::vector<double>>();
  double s = cont->lo;
  for (const auto& [mass, level] : pieces) {
    if (mass <= 0.0 || s + mass <= s) break;
    starts->push_back(s);
    ends->push_back(s + mass);
    values->push_back(level);
    s += mass;
  }
  w.f = MeasurableFunction::constant(0.0).with_continuum([starts, ends, values](double x) {
    const auto it = std::upper_bound(starts->begin(), starts->end(), x);
    if (it == starts->begin()) return 0.0;
    const auto i = static_cast<std::size_t>(it - starts->begin()) - 1;
    return x < (*ends)[i] ? (*values)[i] : 0.0;
  });

  const bool bounded1 = std::isfinite(s1);
  const bool exceeds = s2 > 10.0 * s1;
  out.verdict.criteria_log.push_back({"phi1_partials_bounded", bounded1 ? "holds" : "fails", s1});
  out.verdict.criteria_log.push_back({"phi2_exceeds_10x", exceeds ? "holds" : "fails", s2});
  if (bounded1 && s2_increasing && exceeds) {
    out.verdict.status = Status::Refuted;
    out.verdict.note =
        "no non-zero weighted composition is bounded: the witness lies in the Phi1 class while "
        "every non-zero (u, T) pushes its Phi2 modular past the bound";
    Witness ww;
    ww.kind = "constructed_function";
    ww.detail = w.note;
    ww.trace = w.phi2_partials;
    out.verdict.witness = ww;
  } else {
    out.verdict.status = Status::Inconclusive;
    out.verdict.note = "the constructed sums did not separate under the budget";
  }
  out.witness = w;
  return out;
}

ConstructedWitness escape_witness(const YoungFunction& phi1, const YoungFunction& phi2,
                                  const MeasureSpace& space, double lo, double hi,
                                  OperatorBudget budget) {
  const auto& cont = space.continuum();
  if (!cont) throw PreconditionError("escape_witness: the space has no interval part");
  if (cont->density) {
    throw PreconditionError("escape_witness: interval packing is only implemented for unit "
                            "density");
  }
  if (!(lo >= cont->lo && hi <= cont->hi && hi > lo)) {
    throw PreconditionError("escape_witness: the region must be a positive-length sub-interval "
                            "of the interval part");
  }
  const auto dom = dominates(phi1, phi2);
  if (dom.holds) {
    throw PreconditionError("escape_witness: Phi2 is dominated by Phi1 on the grid");
  }
  const auto d2 = check_growth(phi2, GrowthCondition::Delta2);
  if (!d2.holds) {
    throw PreconditionError("escape_witness: missing Delta2 certificate for Phi2");
  }

  ConstructedWitness w;
  w.checkpoints = kWitnessCheckpoints;
  w.note = "levels x_n with Phi2(x_n) > Phi1(n x_n); f = sum x_n on E_n";

  const double length = hi - lo;
  // n0: the tail sum of (n0+n+1)^{-2} must fit inside the region.
  std::size_t n0 = 1;
  const auto tail_fits = [&](std::size_t m) {
    double tail = 0.0;
    for (std::size_t k = m + 2; k < m + 2 + 200000; ++k) tail += 1.0 / (double(k) * double(k));
    tail += 1.0 / double(m + 2 + 200000 - 1);  // integral bound on the remainder
    return tail < length;
  };
  while (n0 < 1000000 && !tail_fits(n0)) n0 *= 2;
  if (!tail_fits(n0)) {
    w.note = "no n0 fits the region; inconclusive";
    return w;
  }

  const std::size_t terms = 10000;
  std::vector<double> log_x;
  log_x.reserve(terms);
  // Phi1(x_n) >= 1 keeps mu(E_n) <= mu(F_n).
  double t = std::log(inverse(phi1, 1.0));
  const double bump = std::log(1.0 + 1e-6);
  for (std::size_t n = 1; n <= terms; ++n) {
    const auto found = search_level(phi1, phi2, t + bump, std::log(double(n)));
    if (!found) {
      w.note = "level search exhausted its ladder at n = " + std::to_string(n) +
               "; inconclusive";
      w.levels.clear();
      w.terms = 0;
      return w;
    }
    t = *found;
    log_x.push_back(t);
  }

  double s1 = 0.0;
  double s2 = 0.0;
  bool s2_increasing = true;
  std::vector<std::pair<double, double>> pieces;  // (E_n length, level)
  std::vector<double> f_masses;
  for (std::size_t n = 1; n <= terms; ++n) {
    const double f_mass = 1.0 / (double(n0 + n + 1) * double(n0 + n + 1));
    const double log_e_mass = std::log(f_mass) - phi1.log_value(log_x[n - 1]);
    const double term1 = std::exp(phi1.log_value(log_x[n - 1]) + log_e_mass);
    const double term2 = std::exp(phi2.log_value(log_x[n - 1]) + log_e_mass);
    s1 += term1;
    if (!(term2 > 0.0)) s2_increasing = false;
    s2 += term2;
    w.levels.push_back(std::exp(log_x[n - 1]));
    w.piece_masses.push_back(std::exp(log_e_mass));
    f_masses.push_back(f_mass);
    pieces.emplace_back(std::exp(log_e_mass), std::exp(log_x[n - 1]));
    if (std::find(w.checkpoints.begin(), w.checkpoints.end(), n) != w.checkpoints.end()) {
      w.phi1_partials.push_back(s1);
      w.phi2_partials.push_back(s2);
    }
  }
  w.terms = terms;
  w.phi1_bound = s1;
  w.phi2_increasing = s2_increasing;

  auto starts = std::make_shared<std::vector<double>>();
  auto ends = std::make_shared<std::vector<double>>();
  auto values = std::make_shared<std::vector<double>>();
  double s = lo;
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    const auto& [e_mass, level] = pieces[n];
    if (e_mass <= 0.0 || s + e_mass <= s) break;
    starts->push_back(s);
    ends->push_back(s + e_mass);
    values->push_back(level);
    s += f_masses[n];  // reserve the full F_n slot, E_n sits at its left end
  }
  w.f = MeasurableFunction::constant(0.0).with_continuum([starts, ends, values](double x) {
    const auto it = std::upper_bound(starts->begin(), starts->end(), x);
    if (it == starts->begin()) return 0.0;
    const auto i = static_cast<std::size_t>(it - starts->begin()) - 1;
    return x < (*ends)[i] ? (*values)[i] : 0.0;
  });
  (void)budget;
  return w;
}

Verdict comp_necessary(const Transformation& t, const MeasureSpace& space,
                       const YoungFunction& phi1, const YoungFunction& phi2,
                       OperatorBudget budget) {
  const auto dom = dominates(phi1, phi2);
  if (dom.holds) {
    throw PreconditionError("comp_necessary: requires Phi2 not dominated by Phi1, but the grid "
                            "certifies domination");
  }
  Verdict v;
  v.criteria_log.push_back({"domination_phi2_by_phi1", "fails", dom.a});

  const auto scan = scan_interval(space, [&](double x) { return interval_f0(t, x); }, budget);
  if (scan.scanned) {
    if (scan.violating_length >= budget.min_length) {
      v.criteria_log.push_back({"interval_vanishing", "fails", scan.violating_length});
      v.status = Status::Refuted;
      v.witness = interval_witness(scan, "f0");
      return v;
    }
    v.criteria_log.push_back({"interval_vanishing", "holds", scan.max_value});
  }

  const auto f0 = radon_nikodym(space, t);
  std::size_t pos = 0;
  const auto sup = scan_sup(
      space,
      [&](const Atom& a) {
        const double d = f0.values[pos++];
        if (d <= 0.0) return 0.0;
        return inverse(phi1, 1.0 / a.mass) / inverse(phi2, 1.0 / (d * a.mass));
      },
      budget);
  v.criteria_log.push_back({"necessary_ratio_sup", tail_name(sup.tail), sup.sup});
  if (sup.tail == TailClass::Diverged) {
    v.status = Status::Refuted;
    v.witness = sup_witness(sup, "Phi1^{-1}(1/mu) / Phi2^{-1}(1/(f0 mu))");
    return v;
  }
  v.status = Status::Inconclusive;
  v.note = "necessary conditions pass, which certifies nothing by itself";
  return v;
}

Verdict comp_sufficient_atomic(const Transformation& t, const MeasureSpace& space,
                               const YoungFunction& phi1, const YoungFunction& phi2,
                               OperatorBudget budget) {
  const auto scan = scan_interval(space, [&](double x) { return interval_f0(t, x); }, budget);
  require_vanishing_interval(space, scan, "comp_sufficient_atomic", "f0");
  const auto c1 = require_delta_prime(phi1, "comp_sufficient_atomic", "Phi1");
  const auto c2 = require_delta_prime(phi2, "comp_sufficient_atomic", "Phi2");
  const auto composed = compose_with_inverse(phi2, phi1);
  const auto validity = validate_young(composed);
  if (!validity.valid) {
    throw PreconditionError("comp_sufficient_atomic: Phi2 o Phi1^{-1} fails the "
                            "Young-function grid checks: " +
                            validity.failure);
  }

  Verdict v;
  v.criteria_log.push_back({"delta_prime_phi1", "holds", c1.constant});
  v.criteria_log.push_back({"delta_prime_phi2", "holds", c2.constant});
  v.criteria_log.push_back({"composite_young", "valid", 0.0});

  const auto f0 = radon_nikodym(space, t);
  std::size_t pos = 0;
  const auto sup = scan_sup(
      space,
      [&](const Atom& a) {
        const double d = f0.values[pos++];
        // Atoms carrying no preimage mass contribute nothing even when the
        // Phi2 factor overflows, so bail out before evaluating it.
        if (d <= 0.0) return 0.0;
        const double denom = inverse(phi1, a.mass);
        return phi2(1.0 / denom) * d * a.mass;
      },
      budget);
  v.criteria_log.push_back({"atom_sup_M", tail_name(sup.tail), sup.sup});
  if (sup.tail == TailClass::Stabilized && std::isfinite(sup.sup)) {
    v.status = Status::Certified;
    v.bound = c2.constant * sup.sup * composed(c1.constant) + 1.0;
    return v;
  }
  v.status = Status::Inconclusive;
  v.note = "the partial maxima did not stabilize under the budget; sufficiency cannot refute";
  return v;
}

ChainReport comp_condition_chain(const Transformation& t, const MeasureSpace& space,
                                 const YoungFunction& phi1, const YoungFunction& phi2,
                                 const YoungFunction& phi3, OperatorBudget budget) {
  const auto triple = check_triple_inequality(phi1, phi2, phi3, TripleDirection::Phi1Left);
  if (!triple.holds) {
    throw PreconditionError("comp_condition_chain: needs Phi1(xy) <= Phi2(x) + Phi3(y) on the "
                            "grid");
  }
  require_delta_prime(phi2, "comp_condition_chain", "Phi2");

  ChainReport r;
  const auto scan = scan_interval(space, [&](double x) { return interval_f0(t, x); }, budget);
  const bool interval_clear = !scan.scanned || scan.violating_length < budget.min_length;
  r.criteria_log.push_back(
      {"interval_vanishing", interval_clear ? "holds" : "fails", scan.violating_length});

  const auto f0 = radon_nikodym(space, t);
  std::size_t pos = 0;
  const auto sup_ii = scan_sup(
      space,
      [&](const Atom& a) {
        const double nu = f0.values[pos++] * a.mass;
        if (nu <= 0.0) return 0.0;
        return inverse(phi1, 1.0 / a.mass) / inverse(phi2, 1.0 / nu);
      },
      budget);
  pos = 0;
  const auto sup_iii = scan_sup(
      space,
      [&](const Atom& a) {
        const double d = f0.values[pos++];
        if (d <= 0.0) return 0.0;
        return d * phi2(inverse(phi3, 1.0 / a.mass));
      },
      budget);

  r.sup_ii = sup_ii.sup;
  r.sup_iii = sup_iii.sup;
  r.cond_ii = interval_clear && sup_ii.tail == TailClass::Stabilized && std::isfinite(sup_ii.sup);
  r.cond_iii =
      interval_clear && sup_iii.tail == TailClass::Stabilized && std::isfinite(sup_iii.sup);
  r.implication_ok = !(r.cond_ii && !r.cond_iii);
  r.criteria_log.push_back({"cond_ii_ratio", tail_name(sup_ii.tail), sup_ii.sup});
  r.criteria_log.push_back({"cond_iii_sup", tail_name(sup_iii.tail), sup_iii.sup});
  r.note = "condition (iii) uses the composition Phi2(Phi3^{-1}(.))";
  return r;
}

SandwichReport comp_mult_sandwich(const Transformation& t, const MeasurableFunction& f,
                                  const MeasureSpace& space, const YoungFunction& phi1,
                                  const YoungFunction& phi2, OperatorBudget budget) {
  if (t.has_interval()) {
    throw PreconditionError("comp_mult_sandwich: only atoms-only transformations are supported");
  }
  (void)phi1;  // both norms live on the target side of the pair
  SandwichReport r;
  const auto ct_f = apply_comp(t, f, space);
  const auto ct = luxemburg_norm(phi2, ct_f, space, 1e-9, budget.integration);
  r.ct_norm = ct.diverged ? kInf : ct.value;

  const auto f0 = radon_nikodym(space, t);
  std::vector<double> weight(f0.values.size());
  for (std::size_t i = 0; i < weight.size(); ++i) weight[i] = inverse(phi2, f0.values[i]);
  const auto mult_f = apply_mult(MeasurableFunction::from_values(space, weight), f);
  const auto mn = luxemburg_norm(phi2, mult_f, space, 1e-9, budget.integration);
  r.mult_norm = mn.diverged ? kInf : mn.value;
  r.criteria_log.push_back({"ct_norm", ct.diverged ? "diverged" : "finite", r.ct_norm});
  r.criteria_log.push_back({"mult_norm", mn.diverged ? "diverged" : "finite", r.mult_norm});

  const double slack = 1.0 + 1e-9;
  const auto nabla = check_growth(phi2, GrowthCondition::NablaPrime);
  if (nabla.holds) {
    r.b = nabla.constant;
    r.first_holds = r.ct_norm <= nabla.constant * r.mult_norm * slack;
    r.criteria_log.push_back(
        {"first_inequality", *r.first_holds ? "holds" : "fails", nabla.constant});
  }
  const auto delta = check_growth(phi2, GrowthCondition::DeltaPrime);
  if (delta.holds) {
    r.c = delta.constant;
    r.second_holds = r.mult_norm <= delta.constant * r.ct_norm * slack;
    r.criteria_log.push_back(
        {"second_inequality", *r.second_holds ? "holds" : "fails", delta.constant});
  }
  r.holds = (!r.first_holds || *r.first_holds) && (!r.second_holds || *r.second_holds);
  return r;
}

Verdict comp_dual_membership(const Transformation& t, const MeasureSpace& space,
                             const YoungFunction& phi1, const YoungFunction& phi2,
                             const std::optional<YoungFunction>& phi3_override,
                             OperatorBudget budget) {
  require_delta_prime(phi2, "comp_dual_membership", "Phi2");

  std::shared_ptr<YoungFunction> inner_gauge;
  if (phi3_override) {
    const auto validity = validate_young(*phi3_override);
    if (!validity.valid) {
      throw PreconditionError("comp_dual_membership: the supplied Phi3 fails the Young-function "
                              "grid checks: " +
                              validity.failure);
    }
    auto psi1 = std::make_shared<YoungFunction>(conjugate_function(phi1));
    auto psi3 = std::make_shared<YoungFunction>(conjugate_function(*phi3_override));
    inner_gauge = std::make_shared<YoungFunction>(
        YoungFunction::custom("psi3(psi1(.))", [psi1, psi3](double y) {
          return (*psi3)((*psi1)(y));
        }));
  } else {
    inner_gauge = std::make_shared<YoungFunction>(dual_composite(phi1, phi2));
  }
  auto phi2_copy = std::make_shared<YoungFunction>(phi2);
  const auto gauge =
      YoungFunction::custom("psi3(psi1(phi2^{-1}(.)))", [inner_gauge, phi2_copy](double y) {
        return (*inner_gauge)(inverse(*phi2_copy, y));
      });

  const auto f0 = radon_nikodym(space, t);
  auto f0_fn = MeasurableFunction::from_values(space, f0.values);
  if (space.continuum() && t.has_interval()) {
    auto tt = std::make_shared<Transformation>(t);
    f0_fn = f0_fn.with_continuum([tt](double x) { return tt->pushforward_density(x); });
  }

  Verdict v;
  const auto mem = member(gauge, f0_fn, space, budget.integration);
  if (mem.finite) {
    v.status = Status::Certified;
    v.bound = mem.at_scale.value;
    v.criteria_log.push_back({"membership", "member", mem.scale});
    return v;
  }
  if (mem.at_scale.diverged() || mem.at_scale.atom_tail == TailClass::Growing) {
    v.status = Status::Refuted;
    Witness w;
    w.kind = "modular_divergence";
    w.detail = "the composed modular of f0 diverges at every scanned scale";
    w.trace = {mem.scale, mem.at_scale.value};
    v.witness = w;
    v.criteria_log.push_back({"membership", "excluded", mem.scale});
    return v;
  }
  v.status = Status::Inconclusive;
  v.criteria_log.push_back({"membership", "unsettled", mem.scale});
  return v;
}

}  // namespace orlicz
