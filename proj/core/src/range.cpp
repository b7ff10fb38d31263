#include "orlicz/range.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "orlicz/errors.hpp"
#include "orlicz/orlicz_space.hpp"

namespace orlicz {

namespace {

struct IntervalSupport {
  bool scanned = false;
  double violating_length = 0.0;
  double max_value = 0.0;
};

template <typename F>
IntervalSupport scan_symbol(const MeasureSpace& space, F&& v, const RangeBudget& budget) {
  IntervalSupport out;
  const auto& cont = space.continuum();
  if (!cont) return out;
  out.scanned = true;
  const int n = std::max(16, budget.scan_points);
  const double width = (cont->hi - cont->lo) / n;
  for (int i = 0; i < n; ++i) {
    const double x = cont->lo + (i + 0.5) * width;
    const double val = std::abs(v(x));
    out.max_value = std::max(out.max_value, val);
    if (val > budget.zero_delta) out.violating_length += width;
  }
  return out;
}

void require_membership(const YoungFunction& phi3, const MeasurableFunction& g,
                        const MeasureSpace& space, const RangeBudget& budget, const char* who,
                        const char* what) {
  const auto mem = member(phi3, g, space, budget.integration);
  if (!mem.finite) {
    std::ostringstream msg;
    msg << who << ": missing membership " << what << " in the Phi3 class (probe at scale "
        << mem.scale << " did not settle finite)";
    throw PreconditionError(msg.str());
  }
}

GrowthCertificate require_cert(const YoungFunction& phi, GrowthCondition cond, const char* who,
                               const char* role) {
  auto cert = check_growth(phi, cond);
  if (!cert.holds) {
    std::ostringstream msg;
    msg << who << ": missing ";
    switch (cond) {
      case GrowthCondition::Delta2: msg << "Delta2"; break;
      case GrowthCondition::DeltaPrime: msg << "Delta'"; break;
      case GrowthCondition::NablaPrime: msg << "nabla'"; break;
    }
    msg << " certificate for " << role << " (" << phi.name() << ")";
    throw PreconditionError(msg.str());
  }
  return cert;
}

// Shared atom-side decision. `support` holds positions of support atoms in
// atom order; stability on a truncated generator means none of them sits in
// the final decade (positions past a tenth of the materialized count).
void decide(RangeReport& r, const MeasureSpace& space, const std::vector<std::size_t>& support) {
  const auto n = space.atoms().size();
  const std::size_t decade_start = n / 10;
  bool growing = false;
  for (const auto pos : support) {
    if (pos >= decade_start) growing = true;
  }
  r.criteria_log.push_back({"support_count", "computed", double(support.size())});

  if (!r.continuum_vanishes) {
    r.classification = RangeClass::NotClosedRange;
    r.note += "interval support of positive length rules out closed range; ";
    return;
  }
  if (!space.truncated()) {
    r.classification = RangeClass::FiniteRank;
    r.rank_bound = support.size();
    r.criteria_log.push_back({"support_stable", "holds", 0.0});
    return;
  }
  if (growing) {
    r.classification = RangeClass::NotClosedRange;
    r.criteria_log.push_back({"support_stable", "fails", double(n)});
    r.note += "trend call: support atoms still appear in the final decade of the budget; ";
    return;
  }
  r.classification = RangeClass::FiniteRank;
  r.rank_bound = support.size();
  r.criteria_log.push_back({"support_stable", "holds", double(decade_start)});
  r.note += "trend call: no new support atoms in the final decade of the budget; ";
}

}  // namespace

const char* to_string(RangeClass c) {
  switch (c) {
    case RangeClass::FiniteRank: return "FiniteRank";
    case RangeClass::ClosedRange: return "ClosedRange";
    case RangeClass::NotClosedRange: return "NotClosedRange";
    default: return "Inconclusive";
  }
}

RangeReport classify_mult(const MeasurableFunction& u, const MeasureSpace& space,
                          const YoungFunction& phi1, const YoungFunction& phi2,
                          const YoungFunction& phi3, RangeRegime regime, RangeBudget budget) {
  RangeReport r;
  if (regime == RangeRegime::A) {
    const auto cert = require_cert(phi1, GrowthCondition::DeltaPrime, "classify_mult", "Phi1");
    const auto triple = check_triple_inequality(phi1, phi2, phi3, TripleDirection::Phi2Left);
    if (!triple.holds) {
      throw PreconditionError(
          "classify_mult: regime A needs Phi2(xy) <= Phi1(x) + Phi3(y) on the grid");
    }
    require_membership(phi3, u, space, budget, "classify_mult", "u");
    r.criteria_log.push_back({"delta_prime_phi1", "holds", cert.constant});
    r.criteria_log.push_back({"triple_inequality_phi2_left", "holds", 0.0});
    r.criteria_log.push_back({"membership_u_phi3", "finite", 0.0});
  } else {
    const auto cert = require_cert(phi2, GrowthCondition::DeltaPrime, "classify_mult", "Phi2");
    const double thr = budget.support_threshold;
    auto uu = std::make_shared<MeasurableFunction>(u);
    auto recip = MeasurableFunction::from_rule([uu, thr](const Atom& a) {
      const double v = uu->value_on(a);
      return std::abs(v) > thr ? 1.0 / v : 0.0;
    });
    if (u.has_continuum_part()) {
      recip = recip.with_continuum([uu, thr](double x) {
        const double v = uu->on_continuum(x);
        return std::abs(v) > thr ? 1.0 / v : 0.0;
      });
    }
    require_membership(phi3, recip, space, budget, "classify_mult", "1/u (on the support)");
    r.criteria_log.push_back({"delta_prime_phi2", "holds", cert.constant});
    r.criteria_log.push_back({"membership_recip_u_phi3", "finite", 0.0});
    r.note += "regime B: the interval clause is applied as in regime A; ";
  }

  const auto scan = scan_symbol(space, [&](double x) { return u.on_continuum(x); }, budget);
  if (scan.scanned) {
    r.continuum_vanishes = scan.violating_length < budget.min_length;
    r.criteria_log.push_back({"continuum_vanishing", r.continuum_vanishes ? "holds" : "fails",
                              scan.violating_length});
  }

  std::vector<std::size_t> support;
  const auto& atoms = space.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (std::abs(u.value_on(atoms[i])) > budget.support_threshold) {
      support.push_back(i);
      r.support_atoms.push_back(atoms[i].id);
    }
  }
  decide(r, space, support);
  return r;
}

RangeReport classify_comp(const Transformation& t, const MeasureSpace& space,
                          const YoungFunction& phi1, const YoungFunction& phi2,
                          const YoungFunction& phi3, RangeRegime regime, RangeBudget budget) {
  RangeReport r;
  if (regime == RangeRegime::A) {
    const auto triple = check_triple_inequality(phi1, phi2, phi3, TripleDirection::Phi2Left);
    if (!triple.holds) {
      throw PreconditionError(
          "classify_comp: regime A needs Phi2(xy) <= Phi1(x) + Phi3(y) on the grid");
    }
    if (!surjective_on_atoms(space, t)) {
      throw PreconditionError(
          "classify_comp: regime A needs T surjective on the materialized atoms");
    }
    r.criteria_log.push_back({"triple_inequality_phi2_left", "holds", 0.0});
    r.criteria_log.push_back({"surjective_on_atoms", "holds", 0.0});
  } else {
    const auto nabla = require_cert(phi2, GrowthCondition::NablaPrime, "classify_comp", "Phi2");
    const auto d2 = require_cert(phi2, GrowthCondition::Delta2, "classify_comp", "Phi2");
    r.criteria_log.push_back({"nabla_prime_phi2", "holds", nabla.constant});
    r.criteria_log.push_back({"delta_two_phi2", "holds", d2.constant});
    r.note += "regime B: phi3 plays no role in the computed criteria; ";
    (void)phi3;
  }

  if (t.has_interval()) {
    const auto scan =
        scan_symbol(space, [&](double x) { return t.pushforward_density(x); }, budget);
    if (scan.scanned) {
      r.continuum_vanishes = scan.violating_length < budget.min_length;
      r.criteria_log.push_back({"pushforward_interval_vanishing",
                                r.continuum_vanishes ? "holds" : "fails",
                                scan.violating_length});
    }
  }

  const auto f0 = radon_nikodym(space, t);
  if (f0.escaped_mass > 0.0) {
    r.note += "escaped image mass " + std::to_string(f0.escaped_mass) +
              " is not attributable to materialized atoms; ";
    r.criteria_log.push_back({"escaped_mass", "present", f0.escaped_mass});
  }
  const auto& atoms = space.atoms();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (f0.values[i] > budget.support_threshold) {
      support.push_back(i);
      r.support_atoms.push_back(atoms[i].id);
      r.preimages.emplace_back();
    }
  }
  // Preimage lists for the span: position in `support` of each image atom.
  std::vector<std::ptrdiff_t> slot(atoms.size(), -1);
  for (std::size_t k = 0; k < support.size(); ++k) slot[support[k]] = std::ptrdiff_t(k);
  for (const auto& a : atoms) {
    const auto pos = t.image_position(space, a);
    if (pos >= 0 && slot[static_cast<std::size_t>(pos)] >= 0) {
      r.preimages[static_cast<std::size_t>(slot[static_cast<std::size_t>(pos)])].push_back(a.id);
    }
  }
  decide(r, space, support);
  return r;
}

std::vector<MeasurableFunction> finite_rank_span(const RangeReport& report, OperatorKind kind) {
  if (report.classification != RangeClass::FiniteRank) {
    throw PreconditionError("finite_rank_span: report is not classified FiniteRank");
  }
  std::vector<MeasurableFunction> basis;
  if (kind == OperatorKind::Mult) {
    for (const auto& id : report.support_atoms) {
      basis.push_back(MeasurableFunction::from_map({{id, 1.0}}));
    }
    return basis;
  }
  for (const auto& pre : report.preimages) {
    std::unordered_map<std::string, double> values;
    for (const auto& id : pre) values[id] = 1.0;
    basis.push_back(MeasurableFunction::from_map(std::move(values)));
  }
  return basis;
}

}  // namespace orlicz
