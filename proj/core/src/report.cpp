#include "orlicz/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>

#include "json.hpp"
#include "orlicz/orlicz_space.hpp"
#include "orlicz/range.hpp"

namespace orlicz {

namespace {

// Grid inequality slack accepted for tabulated conjugates, which carry about
// 1e-5 relative error.
constexpr double kProductBoundTol = 1e-4;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Materialized {
  std::map<std::string, YoungFunction> youngs;
  std::map<std::string, MeasurableFunction> functions;
  std::map<std::string, Transformation> transforms;
  MeasureSpace space = MeasureSpace::atomic({});
};

YoungFunction make_young(const YoungSpec& spec) {
  if (spec.kind == "power") return YoungFunction::power(spec.param);
  if (spec.kind == "exp_power") return YoungFunction::exp_power(spec.param);
  if (spec.kind == "l_log_l") return YoungFunction::l_log_l(spec.param);
  const Expression e = *spec.formula;
  YoungFunction phi = YoungFunction::custom(spec.name, [e](double x) { return e(x); });
  const auto validity = validate_young(phi);
  if (!validity.valid) {
    throw PreconditionError("Young function '" + spec.name +
                            "' fails the grid checks: " + validity.failure);
  }
  return phi;
}

Materialized materialize(const AnalysisConfig& cfg, const RunOverrides& ov) {
  Materialized m;
  for (const auto& y : cfg.youngs) m.youngs.emplace(y.name, make_young(y));

  const SpaceSpec& sp = cfg.space;
  if (!sp.atoms.empty()) {
    std::vector<Atom> atoms;
    atoms.reserve(sp.atoms.size());
    for (const auto& a : sp.atoms) atoms.push_back({a.id, a.mass, a.index});
    m.space = MeasureSpace::atomic(std::move(atoms));
  } else if (sp.atom_mass) {
    const Expression mass = *sp.atom_mass;
    m.space = MeasureSpace::generated(
        sp.atom_first, sp.atom_last,
        [mass](std::int64_t n) { return mass(static_cast<double>(n)); },
        ov.budget_n.value_or(sp.atom_budget));
  }
  if (sp.interval_lo) {
    if (sp.density) {
      const Expression d = *sp.density;
      m.space =
          m.space.with_continuum(*sp.interval_lo, *sp.interval_hi, [d](double x) { return d(x); });
    } else {
      m.space = m.space.with_continuum(*sp.interval_lo, *sp.interval_hi);
    }
  }

  std::function<double(std::int64_t)> point = [](std::int64_t n) {
    return static_cast<double>(n);
  };
  if (sp.atom_point) {
    const Expression p = *sp.atom_point;
    point = [p](std::int64_t n) { return p(static_cast<double>(n)); };
  }

  for (const auto& f : cfg.functions) {
    const auto& atom_e = f.on_atoms ? f.on_atoms : f.everywhere;
    const auto& int_e = f.on_interval ? f.on_interval : f.everywhere;
    MeasurableFunction g = MeasurableFunction::constant(0.0);
    if (atom_e) {
      const Expression e = *atom_e;
      g = MeasurableFunction::from_formula([e, point](std::int64_t n) { return e(point(n)); });
    }
    if (int_e) {
      const Expression e = *int_e;
      g = g.with_continuum([e](double x) { return e(x); });
    }
    m.functions.emplace(f.name, g);
  }

  for (const auto& t : cfg.transforms) {
    // Missing atom_map means the transformation leaves atoms in place.
    Transformation tr = Transformation::from_atom_map([](std::int64_t n) { return n; });
    if (t.atom_map) {
      const Expression e = *t.atom_map;
      tr = Transformation::from_atom_map([e](std::int64_t n) {
        return static_cast<std::int64_t>(std::llround(e(static_cast<double>(n))));
      });
    }
    if (t.forward) {
      const Expression f = *t.forward;
      const Expression d = *t.pushforward;
      tr = tr.with_interval([f](double x) { return f(x); }, [d](double x) { return d(x); });
    }
    m.transforms.emplace(t.name, tr);
  }
  return m;
}

std::string key_or(const RunSpec& run, const char* key, const std::string& fallback) {
  const auto it = run.keys.find(key);
  return it == run.keys.end() ? fallback : it->second;
}

double parse_num(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

double num_key(const RunSpec& run, const char* key, double fallback) {
  const auto it = run.keys.find(key);
  return it == run.keys.end() ? fallback : parse_num(it->second);
}

OperatorBudget budget_for(const RunSpec& run, const RunOverrides& ov) {
  OperatorBudget b;
  const double th = num_key(run, "threshold", ov.threshold.value_or(0.0));
  if (th > 0.0) {
    b.threshold = th;
    b.integration.threshold = th;
  }
  return b;
}

double tol_for(const RunSpec& run, const RunOverrides& ov) {
  return num_key(run, "tol", ov.tol.value_or(1e-9));
}

void merge_criteria(RequestReport& entry, const std::string& prefix,
                    const std::vector<CriterionEntry>& log) {
  for (const auto& c : log) entry.criteria.push_back({prefix + "." + c.name, c.outcome, c.value});
}

struct CheckRun {
  std::string name;
  Verdict verdict;
};

void absorb(RequestReport& entry, std::vector<CheckRun>& runs, const std::string& name,
            const std::function<Verdict()>& check) {
  try {
    Verdict v = check();
    merge_criteria(entry, name, v.criteria_log);
    if (!v.note.empty()) entry.notes.push_back(name + ": " + v.note);
    runs.push_back({name, std::move(v)});
  } catch (const PreconditionError& e) {
    entry.refusals.push_back(name + ": " + e.what());
  }
}

// A battery resolves to Refuted or Certified only when its members agree;
// simultaneous contradictory verdicts are surfaced, never masked.
void resolve(RequestReport& entry, const std::vector<CheckRun>& runs) {
  bool any_cert = false;
  bool any_ref = false;
  for (const auto& r : runs) {
    if (r.verdict.status == Status::Certified) {
      any_cert = true;
      if (r.verdict.bound && (!entry.bound || *r.verdict.bound < *entry.bound)) {
        entry.bound = r.verdict.bound;
      }
    }
    if (r.verdict.status == Status::Refuted) {
      any_ref = true;
      if (!entry.witness && r.verdict.witness) entry.witness = r.verdict.witness;
    }
  }
  if (any_cert && any_ref) {
    entry.status = "Conflict";
    entry.notes.push_back("certified and refuted verdicts coexist; this is a defect");
  } else if (any_ref) {
    entry.status = "Refuted";
  } else if (any_cert) {
    entry.status = "Certified";
  } else if (!runs.empty()) {
    entry.status = "Inconclusive";
  } else {
    entry.status = "Refused";
  }
}

std::vector<double> atom_trace(const MeasureSpace& space, const YoungFunction& phi,
                               const MeasurableFunction& h) {
  std::vector<double> out;
  double sum = 0.0;
  std::size_t next = 10;
  const auto& atoms = space.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    sum += phi(std::abs(h.value_on(atoms[i]))) * atoms[i].mass;
    if (i + 1 == next || i + 1 == atoms.size()) {
      out.push_back(sum);
      next *= 10;
    }
  }
  return out;
}

std::vector<double> continuum_trace(const MeasureSpace& space, const YoungFunction& phi,
                                    const MeasurableFunction& h, IntegrationBudget budget) {
  const ContinuumPart& c = *space.continuum();
  const double width = c.hi - c.lo;
  // Cut eps off one endpoint and record the modular over what remains. Only
  // settled quadratures carry information: cutting away a genuine singularity
  // yields settled, climbing values, while cutoffs on the wrong side leave the
  // singularity inside and the quadrature never settles. Stop each side at its
  // first unsettled depth.
  const auto side = [&](bool cut_lo) {
    std::vector<double> out;
    for (int k = 1; k <= 8; ++k) {
      const double eps = width * std::pow(4.0, -k);
      const auto sub = cut_lo
                           ? MeasureSpace::atomic({}).with_continuum(c.lo + eps, c.hi, c.density)
                           : MeasureSpace::atomic({}).with_continuum(c.lo, c.hi - eps, c.density);
      const auto r = modular(phi, h, sub, 1.0, budget);
      if (!r.settled()) break;
      out.push_back(r.value);
    }
    return out;
  };
  std::vector<double> lo_side = side(true);
  std::vector<double> hi_side = side(false);
  if (lo_side.size() != hi_side.size()) {
    return lo_side.size() > hi_side.size() ? lo_side : hi_side;
  }
  if (lo_side.empty()) return lo_side;
  return lo_side.back() >= hi_side.back() ? lo_side : hi_side;
}

// Refutation by a separating function: f lies in the source space while u f
// escapes the target space. The paper-style argument behind every concrete
// unboundedness example.
Verdict witness_check(const MeasurableFunction& u, const MeasurableFunction& f,
                      const MeasureSpace& space, const YoungFunction& phi1,
                      const YoungFunction& phi2, OperatorBudget budget) {
  Verdict v;
  const auto mem1 = member(phi1, f, space, budget.integration);
  v.criteria_log.push_back({"source_membership", mem1.finite ? "finite" : "excluded",
                            mem1.finite ? mem1.at_scale.value : kInf});
  const MeasurableFunction uf = apply_mult(u, f);
  const auto mem2 = member(phi2, uf, space, budget.integration);
  v.criteria_log.push_back({"image_membership", mem2.finite ? "finite" : "excluded",
                            mem2.finite ? mem2.at_scale.value : kInf});
  if (!mem1.finite) {
    v.note = "the witness lies outside the source space, so it separates nothing";
    return v;
  }
  if (mem2.finite) {
    v.note = "the witness image stays inside the target space; no contradiction";
    return v;
  }
  v.status = Status::Refuted;
  Witness w;
  w.kind = "divergence";
  const IntegralResult at_unit = modular(phi2, uf, space, 1.0, budget.integration);
  if (space.continuum() && !at_unit.continuum_converged) {
    w.detail = "target modular of u*f over shrinking interior cutoffs";
    w.interval_lo = space.continuum()->lo;
    w.interval_hi = space.continuum()->hi;
    w.trace = continuum_trace(space, phi2, uf, budget.integration);
  } else {
    w.detail = "target modular partial sums of u*f at atom checkpoints";
    w.trace = atom_trace(space, phi2, uf);
  }
  v.witness = std::move(w);
  return v;
}

void handle_conjugate(RequestReport& entry, const Materialized& m, const RunSpec& run,
                      double tol) {
  const YoungFunction& phi = m.youngs.at(run.keys.at("phi"));
  const double p = num_key(run, "p", 2.0);
  const YoungFunction psi = conjugate_function(phi, tol);

  double worst1 = -kInf;
  double worst2 = -kInf;
  for (int i = 0; i < 64; ++i) {
    const double x = std::pow(10.0, -2.0 + 4.0 * i / 63.0);
    const double a = std::pow(x, p - 1.0);
    const double lhs = std::pow(x, p) / p;
    const double r1 = (phi(x) + psi(a)) / p;
    const double r2 = (phi(a) + psi(x)) / p;
    // An overflowing right side satisfies the bound trivially.
    const double v1 = std::isinf(r1) ? -1.0 : (lhs - r1) / (1.0 + std::abs(r1));
    const double v2 = std::isinf(r2) ? -1.0 : (lhs - r2) / (1.0 + std::abs(r2));
    worst1 = std::max(worst1, v1);
    worst2 = std::max(worst2, v2);
  }
  entry.criteria.push_back(
      {"product_bound_first", worst1 <= kProductBoundTol ? "holds" : "violated", worst1});
  entry.criteria.push_back(
      {"product_bound_second", worst2 <= kProductBoundTol ? "holds" : "violated", worst2});

  if (phi.kind() == YoungKind::Power) {
    const double q = phi.param() / (phi.param() - 1.0);
    const YoungFunction exact = YoungFunction::power(q);
    double err = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double y = std::pow(10.0, -2.0 + 4.0 * i / 63.0);
      err = std::max(err, std::abs(psi(y) - exact(y)) / exact(y));
    }
    entry.criteria.push_back({"closed_form_conjugate", "checked", err});
  }

  entry.value = std::max(worst1, worst2);
  entry.status = *entry.value <= kProductBoundTol ? "Holds" : "Violated";
}

void handle_norm(RequestReport& entry, const Materialized& m, const RunSpec& run, double tol,
                 OperatorBudget budget) {
  const MeasurableFunction& f = m.functions.at(run.keys.at("f"));
  const YoungFunction& phi = m.youngs.at(run.keys.at("phi"));
  const NormResult nr = luxemburg_norm(phi, f, m.space, tol, budget.integration);
  entry.value = nr.diverged ? kInf : nr.value;
  entry.status = nr.diverged ? "Diverged" : "Finite";
  entry.criteria.push_back({"luxemburg_norm", nr.diverged ? "diverged" : "finite", *entry.value});

  const double scale = num_key(run, "scale", 1.0);
  const IntegralResult mod = modular(phi, f, m.space, scale, budget.integration);
  entry.modular_value = mod.value;
  entry.criteria.push_back(
      {"modular_at_scale", mod.settled() ? "settled" : mod.diverged() ? "diverged" : "growing",
       mod.value});
}

void handle_check_mult(RequestReport& entry, const Materialized& m, const RunSpec& run,
                       OperatorBudget budget) {
  const MeasurableFunction& u = m.functions.at(run.keys.at("u"));
  const YoungFunction& phi1 = m.youngs.at(run.keys.at("phi1"));
  const YoungFunction& phi2 = m.youngs.at(run.keys.at("phi2"));
  const YoungFunction* phi3 = nullptr;
  if (run.keys.count("phi3")) phi3 = &m.youngs.at(run.keys.at("phi3"));
  const MeasurableFunction* wf = nullptr;
  if (run.keys.count("witness_f")) wf = &m.functions.at(run.keys.at("witness_f"));

  const std::string method = key_or(run, "method", "auto");
  const bool all = method == "auto";
  std::vector<CheckRun> runs;
  if ((all && phi3) || method == "sufficient") {
    absorb(entry, runs, "sufficient",
           [&] { return mult_bounded_sufficient(u, m.space, phi1, phi2, *phi3, budget); });
  }
  if (all || method == "sufficient-atomic") {
    absorb(entry, runs, "sufficient_atomic",
           [&] { return mult_bounded_sufficient_atomic(u, m.space, phi1, phi2, budget); });
  }
  if ((all && phi3) || method == "necessary") {
    absorb(entry, runs, "necessary", [&] {
      return mult_necessary_atomic(u, m.space, phi1, phi2, *phi3, TripleDirection::Phi1Left,
                                   budget);
    });
  }
  if (all || method == "dual") {
    absorb(entry, runs, "dual",
           [&] { return mult_dual_membership(u, m.space, phi1, phi2, {}, budget); });
  }
  if ((all && wf) || method == "witness") {
    absorb(entry, runs, "witness",
           [&] { return witness_check(u, *wf, m.space, phi1, phi2, budget); });
  }
  resolve(entry, runs);
}

void handle_check_comp(RequestReport& entry, const Materialized& m, const RunSpec& run,
                       OperatorBudget budget) {
  const Transformation& t = m.transforms.at(run.keys.at("transform"));
  const YoungFunction& phi1 = m.youngs.at(run.keys.at("phi1"));
  const YoungFunction& phi2 = m.youngs.at(run.keys.at("phi2"));
  const YoungFunction* phi3 = nullptr;
  if (run.keys.count("phi3")) phi3 = &m.youngs.at(run.keys.at("phi3"));

  const std::string method = key_or(run, "method", "auto");
  const bool all = method == "auto";

  if (method == "sandwich") {
    const MeasurableFunction& f = m.functions.at(run.keys.at("f"));
    const SandwichReport sr = comp_mult_sandwich(t, f, m.space, phi1, phi2, budget);
    merge_criteria(entry, "sandwich", sr.criteria_log);
    entry.status = sr.holds ? "Holds" : "Violated";
    return;
  }

  std::vector<CheckRun> runs;
  if (all || method == "necessary") {
    absorb(entry, runs, "necessary",
           [&] { return comp_necessary(t, m.space, phi1, phi2, budget); });
  }
  if (all || method == "sufficient-atomic") {
    absorb(entry, runs, "sufficient_atomic",
           [&] { return comp_sufficient_atomic(t, m.space, phi1, phi2, budget); });
  }
  if (all || method == "dual") {
    absorb(entry, runs, "dual",
           [&] { return comp_dual_membership(t, m.space, phi1, phi2, {}, budget); });
  }
  if ((all && phi3) || method == "chain") {
    try {
      const ChainReport cr = comp_condition_chain(t, m.space, phi1, phi2, *phi3, budget);
      merge_criteria(entry, "chain", cr.criteria_log);
      if (!cr.note.empty()) entry.notes.push_back("chain: " + cr.note);
      if (!cr.implication_ok) {
        entry.notes.push_back("chain: condition (ii) held without condition (iii)");
      }
      if (method == "chain") {
        entry.status = cr.implication_ok ? "Holds" : "Violated";
        return;
      }
    } catch (const PreconditionError& e) {
      entry.refusals.push_back(std::string("chain: ") + e.what());
      if (method == "chain") {
        entry.status = "Refused";
        return;
      }
    }
  }
  resolve(entry, runs);
}

void handle_classify_range(RequestReport& entry, const Materialized& m, const RunSpec& run,
                           const RunOverrides& ov) {
  const YoungFunction& phi1 = m.youngs.at(run.keys.at("phi1"));
  const YoungFunction& phi2 = m.youngs.at(run.keys.at("phi2"));
  const YoungFunction& phi3 = m.youngs.at(run.keys.at("phi3"));
  const RangeRegime regime = run.keys.at("regime") == "A" ? RangeRegime::A : RangeRegime::B;
  RangeBudget budget;
  const double th = num_key(run, "threshold", ov.threshold.value_or(0.0));
  if (th > 0.0) budget.integration.threshold = th;

  RangeReport report;
  try {
    if (run.keys.count("u")) {
      const MeasurableFunction& u = m.functions.at(run.keys.at("u"));
      report = classify_mult(u, m.space, phi1, phi2, phi3, regime, budget);
    } else {
      const Transformation& t = m.transforms.at(run.keys.at("transform"));
      report = classify_comp(t, m.space, phi1, phi2, phi3, regime, budget);
    }
  } catch (const PreconditionError& e) {
    entry.status = "Refused";
    entry.refusals.push_back(e.what());
    return;
  }

  entry.status = to_string(report.classification);
  merge_criteria(entry, "range", report.criteria_log);
  std::string note = report.note;
  while (!note.empty() && (note.back() == ' ' || note.back() == ';')) note.pop_back();
  if (!note.empty()) entry.notes.push_back(note);
  if (report.rank_bound) entry.rank = static_cast<int>(*report.rank_bound);
  std::string support = "support atoms: " + std::to_string(report.support_atoms.size());
  for (std::size_t i = 0; i < report.support_atoms.size() && i < 8; ++i) {
    support += (i == 0 ? " (" : ", ") + report.support_atoms[i];
  }
  if (!report.support_atoms.empty()) {
    support += report.support_atoms.size() > 8 ? ", ...)" : ")";
  }
  entry.notes.push_back(support);
  if (!report.continuum_vanishes) {
    entry.notes.push_back("the symbol does not vanish on the interval part");
  }
}

void check_expectations(RequestReport& entry, const RunSpec& run) {
  for (const auto& [name, expected] : run.expectations) {
    if (name.size() > 4 && name.rfind("_tol") == name.size() - 4) continue;
    ExpectationCheck c;
    c.name = name;
    c.expected = expected;
    if (name == "status" || name == "classification") {
      c.actual = entry.status;
      c.ok = c.actual == expected;
    } else if (name == "bound" || name == "value" || name == "modular") {
      const std::optional<double>& got = name == "bound"    ? entry.bound
                                         : name == "value" ? entry.value
                                                           : entry.modular_value;
      const auto tol_it = run.expectations.find(name + "_tol");
      const double tol = tol_it == run.expectations.end() ? 1e-9 : parse_num(tol_it->second);
      if (got) {
        const double want = parse_num(expected);
        c.actual = fmt(*got);
        c.ok = std::abs(*got - want) <= tol * (1.0 + std::abs(want));
      } else {
        c.actual = "<absent>";
      }
    } else if (name == "rank") {
      c.actual = entry.rank ? std::to_string(*entry.rank) : "<absent>";
      c.ok = entry.rank && std::to_string(*entry.rank) == expected;
    } else if (name == "witness_kind") {
      c.actual = entry.witness ? entry.witness->kind : "<absent>";
      c.ok = entry.witness && entry.witness->kind == expected;
    }
    entry.expectations.push_back(std::move(c));
  }
}

RequestReport execute(const RunSpec& run, const Materialized& m, const RunOverrides& ov) {
  RequestReport entry;
  entry.request = run.request;
  entry.label = run.label;
  const auto start = std::chrono::steady_clock::now();
  try {
    const double tol = tol_for(run, ov);
    const OperatorBudget budget = budget_for(run, ov);
    if (run.request == "conjugate") {
      handle_conjugate(entry, m, run, tol);
    } else if (run.request == "norm") {
      handle_norm(entry, m, run, tol, budget);
    } else if (run.request == "check-mult") {
      handle_check_mult(entry, m, run, budget);
    } else if (run.request == "check-comp") {
      handle_check_comp(entry, m, run, budget);
    } else {
      handle_classify_range(entry, m, run, ov);
    }
  } catch (const PreconditionError& e) {
    entry.status = "Refused";
    entry.refusals.push_back(e.what());
  } catch (const std::exception& e) {
    entry.status = "Error";
    entry.notes.push_back(e.what());
  }
  entry.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check_expectations(entry, run);
  return entry;
}

}  // namespace

bool RequestReport::expectations_ok() const {
  return std::all_of(expectations.begin(), expectations.end(),
                     [](const ExpectationCheck& c) { return c.ok; });
}

bool Report::expectations_ok() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const RequestReport& e) { return e.expectations_ok(); });
}

Report run(const AnalysisConfig& cfg, const RunOverrides& overrides) {
  Report report;
  report.source = overrides.source;
  report.seed = overrides.seed;
  const Materialized m = materialize(cfg, overrides);

  std::vector<const RunSpec*> selected;
  for (const auto& r : cfg.runs) {
    if (!overrides.only_request || r.request == *overrides.only_request) selected.push_back(&r);
  }
  if (selected.empty()) {
    throw PreconditionError("no [run] section matches request type '" +
                            overrides.only_request.value_or("") + "'");
  }

  std::vector<std::future<RequestReport>> futures;
  futures.reserve(selected.size());
  for (const RunSpec* r : selected) {
    futures.push_back(std::async(std::launch::async,
                                 [r, &m, &overrides] { return execute(*r, m, overrides); }));
  }
  for (auto& f : futures) report.entries.push_back(f.get());
  return report;
}

std::string to_text(const Report& report) {
  std::ostringstream out;
  out << "report: " << report.source << "\n";
  out << "seed: " << report.seed << "\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const RequestReport& e = report.entries[i];
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", e.elapsed_seconds);
    out << "\n[" << i + 1 << "] " << e.request << " \"" << e.label << "\"  (" << timing << ")\n";
    out << "  status: " << e.status << "\n";
    if (e.bound) out << "  bound: " << fmt(*e.bound) << "\n";
    if (e.value) out << "  value: " << fmt(*e.value) << "\n";
    if (e.modular_value) out << "  modular: " << fmt(*e.modular_value) << "\n";
    if (e.rank) out << "  rank: " << *e.rank << "\n";
    if (e.witness) {
      out << "  witness: " << e.witness->kind << " - " << e.witness->detail << "\n";
      if (e.witness->atom_id) out << "    atom: " << *e.witness->atom_id << "\n";
      if (e.witness->interval_lo) {
        out << "    interval: [" << fmt(*e.witness->interval_lo) << ", "
            << fmt(*e.witness->interval_hi) << "]\n";
      }
      if (!e.witness->trace.empty()) {
        out << "    trace:";
        for (double v : e.witness->trace) out << " " << fmt(v);
        out << "\n";
      }
    }
    if (!e.criteria.empty()) {
      out << "  criteria:\n";
      for (const auto& c : e.criteria) {
        out << "    " << c.name;
        for (std::size_t pad = c.name.size(); pad < 40; ++pad) out << ' ';
        out << c.outcome;
        for (std::size_t pad = c.outcome.size(); pad < 14; ++pad) out << ' ';
        out << fmt(c.value) << "\n";
      }
    }
    for (const auto& r : e.refusals) out << "  refused: " << r << "\n";
    for (const auto& n : e.notes) out << "  note: " << n << "\n";
    for (const auto& c : e.expectations) {
      out << "  expect " << c.name << ": " << (c.ok ? "ok" : "FAIL") << " (expected " << c.expected
          << ", got " << c.actual << ")\n";
    }
  }
  return out.str();
}

std::string to_machine(const Report& report) {
  nlohmann::ordered_json j;
  j["source"] = report.source;
  j["seed"] = report.seed;
  j["entries"] = nlohmann::ordered_json::array();
  for (const RequestReport& e : report.entries) {
    nlohmann::ordered_json o;
    o["request"] = e.request;
    o["label"] = e.label;
    o["status"] = e.status;
    if (e.bound) o["bound"] = *e.bound;
    if (e.value) o["value"] = *e.value;
    if (e.modular_value) o["modular"] = *e.modular_value;
    if (e.rank) o["rank"] = *e.rank;
    if (e.witness) {
      nlohmann::ordered_json w;
      w["kind"] = e.witness->kind;
      w["detail"] = e.witness->detail;
      if (e.witness->atom_id) w["atom"] = *e.witness->atom_id;
      if (e.witness->interval_lo) {
        w["interval"] = {*e.witness->interval_lo, *e.witness->interval_hi};
      }
      w["trace"] = e.witness->trace;
      o["witness"] = std::move(w);
    }
    o["criteria"] = nlohmann::ordered_json::array();
    for (const auto& c : e.criteria) {
      o["criteria"].push_back({{"name", c.name}, {"outcome", c.outcome}, {"value", c.value}});
    }
    o["refusals"] = e.refusals;
    o["notes"] = e.notes;
    o["expectations"] = nlohmann::ordered_json::array();
    for (const auto& c : e.expectations) {
      o["expectations"].push_back(
          {{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok}});
    }
    j["entries"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> expectation_diff(const Report& report) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const RequestReport& e = report.entries[i];
    for (const auto& c : e.expectations) {
      if (c.ok) continue;
      out.push_back("entry " + std::to_string(i + 1) + " (" + e.request + " \"" + e.label +
                    "\"): " + c.name + " expected " + c.expected + ", got " + c.actual);
    }
  }
  return out;
}

}  // namespace orlicz
