#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "orlicz/errors.hpp"
#include "orlicz/operators.hpp"

using namespace orlicz;

namespace {

MeasureSpace three_halving_atoms() {
  return MeasureSpace::atomic({{"x1", 0.5, 1}, {"x2", 0.25, 2}, {"x3", 0.125, 3}});
}

Transformation identity_on(const MeasureSpace& space) {
  std::unordered_map<std::string, std::string> table;
  for (const auto& a : space.atoms()) table[a.id] = a.id;
  return Transformation::from_atom_table(std::move(table));
}

double criterion_value(const Verdict& v, const std::string& name) {
  for (const auto& e : v.criteria_log) {
    if (e.name == name) return e.value;
  }
  FAIL("missing criterion " << name);
  return 0.0;
}

}  // namespace

TEST_CASE("apply_mult multiplies both parts", "[operators]") {
  const auto space = three_halving_atoms().with_continuum(0.0, 1.0);
  const auto u = MeasurableFunction::from_map({{"x1", 2.0}, {"x2", 3.0}, {"x3", 4.0}})
                     .with_continuum([](double x) { return x; });
  const auto f = MeasurableFunction::constant(5.0).with_continuum([](double) { return 7.0; });
  const auto uf = apply_mult(u, f);
  CHECK(uf.value_on(space.atoms()[0]) == 10.0);
  CHECK(uf.value_on(space.atoms()[2]) == 20.0);
  CHECK(uf.on_continuum(0.5) == Catch::Approx(3.5));
}

TEST_CASE("apply_comp rewires atom values and zeroes escaped images", "[operators]") {
  const auto space = three_halving_atoms();
  const auto f = MeasurableFunction::from_map({{"x1", 10.0}, {"x2", 20.0}, {"x3", 30.0}});

  const auto shift = Transformation::from_atom_table(
      {{"x1", "x2"}, {"x2", "x3"}, {"x3", "missing"}});
  const auto g = apply_comp(shift, f, space);
  CHECK(g.value_on(space.atoms()[0]) == 20.0);
  CHECK(g.value_on(space.atoms()[1]) == 30.0);
  CHECK(g.value_on(space.atoms()[2]) == 0.0);

  const auto with_interval =
      identity_on(space).with_interval([](double x) { return x; }, [](double) { return 1.0; });
  CHECK_THROWS_AS(apply_comp(with_interval, f, space), PreconditionError);
}

TEST_CASE("product-bound sufficiency certifies the interval instance", "[operators][mult]") {
  // u(x) = sqrt(x^2 - 1) on [1.2, 2.5]; the Phi3 norm solves
  // modular(u / k) = 1 at k = 1.37997445571037629 (two independent
  // quadratures of the defining integral agree to 13 digits).
  const auto space = MeasureSpace::atomic({}).with_continuum(1.2, 2.5);
  const auto u = MeasurableFunction::constant(0.0).with_continuum(
      [](double x) { return std::sqrt(x * x - 1.0); });
  const auto phi1 = YoungFunction::exp_power(2.0);
  const auto phi2 = YoungFunction::power(2.0);
  const auto phi3 = YoungFunction::l_log_l(2.0);

  const auto m = modular(phi3, u, space);
  CHECK(m.settled());
  CHECK(m.value == Catch::Approx(2.914105134706924).epsilon(1e-8));

  const auto v = mult_bounded_sufficient(u, space, phi1, phi2, phi3);
  REQUIRE(v.status == Status::Certified);
  REQUIRE(v.bound.has_value());
  CHECK(*v.bound == Catch::Approx(2.759948911420753).epsilon(1e-6));
  CHECK(criterion_value(v, "phi3_norm") == Catch::Approx(1.3799744557103763).epsilon(1e-6));
}

TEST_CASE("product-bound sufficiency refuses a failing triple inequality", "[operators][mult]") {
  // power4(xy) <= power2(x) + power2(y) fails at large arguments.
  const auto space = three_halving_atoms();
  const auto u = MeasurableFunction::constant(1.0);
  CHECK_THROWS_AS(mult_bounded_sufficient(u, space, YoungFunction::power(2.0),
                                          YoungFunction::power(4.0), YoungFunction::power(2.0)),
                  PreconditionError);
}

TEST_CASE("certified product bound dominates empirical norms", "[operators][mult]") {
  const auto space = MeasureSpace::atomic({}).with_continuum(1.2, 2.5);
  const auto u = MeasurableFunction::constant(0.0).with_continuum(
      [](double x) { return std::sqrt(x * x - 1.0); });
  const auto phi1 = YoungFunction::exp_power(2.0);
  const auto phi2 = YoungFunction::power(2.0);
  const auto v = mult_bounded_sufficient(u, space, phi1, phi2, YoungFunction::l_log_l(2.0));
  REQUIRE(v.status == Status::Certified);

  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = coef(rng);
    const double b = coef(rng);
    const double c = coef(rng);
    auto f = MeasurableFunction::constant(0.0).with_continuum(
        [a, b, c](double x) { return a + b * x + c * std::sin(3.0 * x); });
    const auto nf = luxemburg_norm(phi1, f, space);
    REQUIRE_FALSE(nf.diverged);
    if (nf.value <= 0.0) continue;
    const double scale = 1.0 / nf.value;
    auto unit = transformed(f, [scale](double y) { return scale * y; });
    const auto image = luxemburg_norm(phi2, apply_mult(u, unit), space);
    REQUIRE_FALSE(image.diverged);
    CHECK(image.value <= *v.bound * (1.0 + 1e-6));
  }
}

TEST_CASE("necessary conditions refute interval-supported multipliers", "[operators][mult]") {
  // The instance with u(x) = 1/x^2 on (0, 2] plus the log-indexed atoms:
  // any multiplier with interval support of positive length is refuted.
  const auto space =
      MeasureSpace::generated(3, 100000, [](std::int64_t n) {
        return 1.0 / (double(n) * double(n) * double(n));
      }).with_continuum(1e-6, 2.0);
  const auto u = MeasurableFunction::from_formula([](std::int64_t n) {
                   const double ln_n = std::log(double(n));
                   return 1.0 / (ln_n * ln_n);
                 }).with_continuum([](double x) { return 1.0 / (x * x); });
  const auto phi1 = YoungFunction::exp_power(1.0);
  const auto phi2 = YoungFunction::l_log_l(1.0);
  const auto phi3 = YoungFunction::l_log_l(2.0);

  const auto v = mult_necessary_atomic(u, space, phi1, phi2, phi3, TripleDirection::Phi2Left);
  REQUIRE(v.status == Status::Refuted);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->kind == "interval_support");
  REQUIRE(v.witness->interval_lo.has_value());
  CHECK(*v.witness->interval_hi <= 2.0);

  // The witness f(x) = x has a settled Phi1 modular while u f = 1/x pushes
  // the Phi2 modular into divergence at the left edge.
  const auto f = MeasurableFunction::from_formula([](std::int64_t) { return 0.0; })
                     .with_continuum([](double x) { return x; });
  const auto lhs = modular(phi1, f, space);
  CHECK(lhs.settled());
  const auto rhs = modular(phi2, apply_mult(u, f), space);
  CHECK(rhs.diverged());
}

TEST_CASE("necessary conditions refute divergent atomic criteria", "[operators][mult]") {
  // Factorial masses truncated at 150 of a million planned atoms: the
  // criterion |u| Phi3^{-1}(1/mass) rises forever, so the sup diverges.
  auto mass = [](std::int64_t n) {
    double m = 1.0;
    for (std::int64_t k = 2; k <= n; ++k) m /= double(k);
    return m;
  };
  const auto space = MeasureSpace::generated(1, 1000000, mass, 150);
  REQUIRE(space.truncated());
  const auto u = MeasurableFunction::constant(1.0);
  const auto v = mult_necessary_atomic(u, space, YoungFunction::power(2.0),
                                       YoungFunction::power(4.0), YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Refuted);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->kind == "sup_divergence");
  CHECK(v.witness->trace.size() >= 2);
}

TEST_CASE("necessary conditions never refute finite plain spaces", "[operators][mult][prop]") {
  std::mt19937_64 rng(7151);
  std::uniform_int_distribution<int> n_atoms(5, 50);
  std::uniform_real_distribution<double> log_mass(-10.0, 3.0);
  std::uniform_real_distribution<double> log_val(-6.0, 6.0);
  std::bernoulli_distribution zero(0.15);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_atoms(rng);
    std::vector<Atom> atoms;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
      atoms.push_back({"a" + std::to_string(i), std::exp(log_mass(rng)), i});
      values.push_back(zero(rng) ? 0.0 : std::exp(log_val(rng)));
    }
    const auto space = MeasureSpace::atomic(std::move(atoms));
    const auto u = MeasurableFunction::from_values(space, values);
    const auto v = mult_necessary_atomic(u, space, YoungFunction::power(2.0),
                                         YoungFunction::power(4.0), YoungFunction::power(4.0));
    REQUIRE(v.status == Status::Inconclusive);
  }
}

TEST_CASE("atomic sufficiency reproduces the hand-checked bound", "[operators][mult]") {
  // Phi1 = power 2, Phi2 = power 4, masses {1, 1/4, 1/16}, u = {1/2, 1, 2}:
  // Phi1^{-1}(mu) = sqrt(2 mu), the ratios u/Phi1^{-1}(mu) come out as
  // {1/(2 sqrt 2), sqrt 2, 4 sqrt 2}, so the per-atom terms
  // Phi2(ratio) * mu are {1/256, 1/4, 16} and M = 16.  With Delta'
  // constants c = 2, b = 4 and (Phi2 o Phi1^{-1})(x) = x^2 the certified
  // bound is 4 * 16 * 4 + 1 = 257.  Everything is dyadic, hence exact.
  const auto space = MeasureSpace::atomic({{"a", 1.0, 1}, {"b", 0.25, 2}, {"c", 0.0625, 3}});
  const auto u = MeasurableFunction::from_map({{"a", 0.5}, {"b", 1.0}, {"c", 2.0}});
  const auto v = mult_bounded_sufficient_atomic(u, space, YoungFunction::power(2.0),
                                                YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Certified);
  CHECK(criterion_value(v, "atom_sup_M") == Catch::Approx(16.0).margin(1e-12));
  REQUIRE(v.bound.has_value());
  CHECK(*v.bound == Catch::Approx(257.0).epsilon(1e-9));
}

TEST_CASE("atomic sufficiency handles balanced dyadic families", "[operators][mult]") {
  // mu_n = 2^-n, u_n = 2^(-n/4), Phi1 = power 2, Phi2 = power 4: every atom
  // contributes exactly 1/16, so M = 1/16 and the bound is 4/16 * 4 + 1 = 2.
  const auto space = MeasureSpace::generated(1, 500, [](std::int64_t n) {
    return std::exp2(-double(n));
  });
  const auto u = MeasurableFunction::from_formula([](std::int64_t n) {
    return std::exp2(-double(n) / 4.0);
  });
  const auto v = mult_bounded_sufficient_atomic(u, space, YoungFunction::power(2.0),
                                                YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Certified);
  CHECK(criterion_value(v, "atom_sup_M") == Catch::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(*v.bound == Catch::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("atomic sufficiency enforces its preconditions", "[operators][mult]") {
  const auto space = three_halving_atoms();
  const auto u = MeasurableFunction::constant(1.0);
  CHECK_THROWS_AS(mult_bounded_sufficient_atomic(u, space, YoungFunction::exp_power(2.0),
                                                 YoungFunction::power(2.0)),
                  PreconditionError);

  // Shrinking pair: the composite sqrt(2 x) is concave, so the summation
  // argument behind the certified bound does not apply.
  CHECK_THROWS_AS(mult_bounded_sufficient_atomic(u, space, YoungFunction::power(4.0),
                                                 YoungFunction::power(2.0)),
                  PreconditionError);

  const auto with_interval = three_halving_atoms().with_continuum(0.0, 1.0);
  const auto live = MeasurableFunction::constant(1.0).with_continuum([](double) { return 1.0; });
  CHECK_THROWS_AS(mult_bounded_sufficient_atomic(live, with_interval, YoungFunction::power(2.0),
                                                 YoungFunction::power(4.0)),
                  PreconditionError);
}

TEST_CASE("dual membership separates members from excluded multipliers", "[operators][mult]") {
  // For Phi1 = power 2, Phi2 = power 4/3 the composed gauge is y^4 / 16.
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0 / 3.0);
  const auto gauge = dual_composite(phi1, phi2);
  CHECK(gauge(2.0) == Catch::Approx(1.0).epsilon(1e-6));

  const auto space = MeasureSpace::generated(1, 1000000, [](std::int64_t n) {
    return 1.0 / (double(n) * double(n));
  }, 10000);
  REQUIRE(space.truncated());

  const auto small = MeasurableFunction::from_formula([](std::int64_t n) {
    return 1.0 / double(n);
  });
  const auto yes = mult_dual_membership(small, space, phi1, phi2);
  CHECK(yes.status == Status::Certified);

  const auto big = MeasurableFunction::from_formula([](std::int64_t n) { return double(n); });
  const auto no = mult_dual_membership(big, space, phi1, phi2);
  CHECK(no.status == Status::Refuted);
  REQUIRE(no.witness.has_value());
  CHECK(no.witness->kind == "modular_divergence");
}

TEST_CASE("dual membership accepts a validated override gauge", "[operators][mult]") {
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0 / 3.0);
  const auto phi3 = YoungFunction::custom("x^2", [](double x) { return x * x; });
  const auto space = MeasureSpace::generated(1, 1000000, [](std::int64_t n) {
    return 1.0 / (double(n) * double(n));
  }, 10000);
  const auto small = MeasurableFunction::from_formula([](std::int64_t n) {
    return 1.0 / double(n);
  });
  const auto composed = mult_dual_membership(small, space, phi1, phi2);
  const auto overridden = mult_dual_membership(small, space, phi1, phi2, phi3);
  CHECK(overridden.status == composed.status);

  const auto bogus = YoungFunction::custom("sqrt", [](double x) { return std::sqrt(x); });
  CHECK_THROWS_AS(mult_dual_membership(small, space, phi1, phi2, bogus), PreconditionError);
}

TEST_CASE("nonexistence scheme separates the two modulars", "[operators][witness]") {
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0);
  const auto space = MeasureSpace::atomic({}).with_continuum(0.0, 1.0);
  const auto report = nonatomic_nonexistence(phi1, phi2, space);
  REQUIRE(report.verdict.status == Status::Refuted);
  REQUIRE(report.witness.has_value());
  const auto& w = *report.witness;
  REQUIRE(w.terms == 10000);
  REQUIRE(w.levels.size() == w.terms);
  REQUIRE(w.phi1_partials.size() == 3);

  // Defining inequalities at sampled indices, in log space.
  for (std::size_t n : {1ull, 2ull, 10ull, 500ull}) {
    const double t = std::log(w.levels[n - 1]) - 2.0 * std::log(double(n));
    const double shift = double(n) * std::log(2.0) + 3.0 * std::log(double(n));
    CHECK(phi2.log_value(t) > phi1.log_value(t + shift));
    if (n > 1) CHECK(w.levels[n - 1] > w.levels[n - 2]);
  }

  // Phi1 partial sums bounded by Phi1(y_1) mu(F); Phi2 partials grow past
  // ten times that bound.
  const double y1 = w.levels[0];
  CHECK(w.phi1_bound <= phi1(y1) * 1.0 + 1e-9);
  CHECK(w.phi1_partials[0] <= w.phi1_partials[1]);
  CHECK(w.phi1_partials[1] <= w.phi1_partials[2]);
  CHECK(w.phi2_increasing);
  CHECK(w.phi2_partials[2] > 10.0 * w.phi1_bound);

  // Pieces pack inside the interval.
  double total = 0.0;
  for (double m : w.piece_masses) total += m;
  CHECK(total <= 1.0 + 1e-12);
  CHECK(w.f.on_continuum(w.piece_masses[0] * 0.5) == Catch::Approx(w.levels[0]));
}

TEST_CASE("nonexistence scheme enforces its preconditions", "[operators][witness]") {
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0);
  CHECK_THROWS_AS(nonatomic_nonexistence(phi1, phi2, three_halving_atoms()), PreconditionError);
  const auto dominated = MeasureSpace::atomic({}).with_continuum(0.0, 1.0);
  CHECK_THROWS_AS(nonatomic_nonexistence(phi2, phi1, dominated), PreconditionError);
  const auto weighted = MeasureSpace::atomic({}).with_continuum(0.0, 1.0, [](double) {
    return 2.0;
  });
  CHECK_THROWS_AS(nonatomic_nonexistence(phi1, phi2, weighted), PreconditionError);
}

TEST_CASE("escape witness stays in the source class and leaves the target", "[operators][witness]") {
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0);
  const auto space = MeasureSpace::atomic({}).with_continuum(0.0, 1.0);
  const auto w = escape_witness(phi1, phi2, space, 0.0, 1.0);
  REQUIRE(w.terms == 10000);
  REQUIRE(w.phi1_partials.size() == 3);

  // Every level clears the escape inequality and the source-class floor.
  for (std::size_t n : {1ull, 7ull, 100ull, 9999ull}) {
    const double x = w.levels[n - 1];
    CHECK(phi2.log_value(std::log(x)) > phi1.log_value(std::log(x) + std::log(double(n))));
    CHECK(phi1(x) >= 1.0 - 1e-12);
  }

  // Phi1 partial sums are exactly the slot masses, so the tail beyond the
  // thousandth term moves them by less than one percent.
  const double drift = (w.phi1_partials[2] - w.phi1_partials[1]) / w.phi1_partials[2];
  CHECK(drift < 0.01);
  CHECK(w.phi2_increasing);
  CHECK(w.phi2_partials[2] > 10.0 * w.phi1_partials[2]);

  // E_n carries mass mu(F_n) / Phi1(x_n).
  for (std::size_t n : {1ull, 5ull, 42ull}) {
    CHECK(w.piece_masses[n - 1] * phi1(w.levels[n - 1]) ==
          Catch::Approx(w.piece_masses[n - 1] * phi1(w.levels[n - 1])));
    CHECK(w.piece_masses[n - 1] <= 1.0);
  }
  CHECK(w.f.on_continuum(w.piece_masses[0] * 0.5) == Catch::Approx(w.levels[0]));

  CHECK_THROWS_AS(escape_witness(phi1, phi2, three_halving_atoms(), 0.0, 1.0),
                  PreconditionError);
  CHECK_THROWS_AS(escape_witness(phi2, phi1, space, 0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(escape_witness(phi1, phi2, space, 0.25, 0.1), PreconditionError);
}

TEST_CASE("composition necessity reproduces the hand-checked ratios", "[operators][comp]") {
  // Identity map on masses {1/2, 1/4, 1/8}: the ratio reduces to
  // mass^(-1/4), so the sup is 2^(3/4).
  const auto space = three_halving_atoms();
  const auto t = identity_on(space);
  const auto v = comp_necessary(t, space, YoungFunction::power(2.0), YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Inconclusive);
  CHECK(criterion_value(v, "necessary_ratio_sup") ==
        Catch::Approx(std::pow(2.0, 0.75)).epsilon(1e-9));

  CHECK_THROWS_AS(comp_necessary(t, space, YoungFunction::power(4.0), YoungFunction::power(2.0)),
                  PreconditionError);
}

TEST_CASE("composition necessity refutes interval pushforward mass", "[operators][comp]") {
  const auto space = three_halving_atoms().with_continuum(0.0, 1.0);
  const auto t = identity_on(space).with_interval([](double x) { return x; },
                                                  [](double) { return 0.5; });
  const auto v = comp_necessary(t, space, YoungFunction::power(2.0), YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Refuted);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->kind == "interval_support");
}

TEST_CASE("composition necessity refutes factorial collapse", "[operators][comp]") {
  auto mass = [](std::int64_t n) {
    double m = 1.0;
    for (std::int64_t k = 2; k <= n; ++k) m /= double(k);
    return m;
  };
  const auto space = MeasureSpace::generated(1, 1000000, mass, 150);
  const auto t = Transformation::from_atom_map([](std::int64_t n) { return n; });
  const auto v = comp_necessary(t, space, YoungFunction::power(2.0), YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Refuted);
  CHECK(v.witness->kind == "sup_divergence");
}

TEST_CASE("composition sufficiency reproduces the hand-checked bound", "[operators][comp]") {
  // Identity on masses {1/2, 1/4, 1/8}, Phi1 = power 2, Phi2 = power 4:
  // per-atom terms 1/(16 mass) give M = 1/2; with c = 2, b = 4 and
  // (Phi2 o Phi1^{-1})(x) = x^2 the bound is 4 * (1/2) * 4 + 1 = 9.
  const auto space = three_halving_atoms();
  const auto t = identity_on(space);
  const auto v =
      comp_sufficient_atomic(t, space, YoungFunction::power(2.0), YoungFunction::power(4.0));
  REQUIRE(v.status == Status::Certified);
  CHECK(criterion_value(v, "atom_sup_M") == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(*v.bound == Catch::Approx(9.0).epsilon(1e-9));

  CHECK_THROWS_AS(
      comp_sufficient_atomic(t, space, YoungFunction::exp_power(2.0), YoungFunction::power(4.0)),
      PreconditionError);
}

TEST_CASE("condition chain holds and implication is never violated", "[operators][comp][prop]") {
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0);
  const auto phi3 = YoungFunction::power(4.0);

  const auto space = three_halving_atoms();
  const auto r = comp_condition_chain(identity_on(space), space, phi1, phi2, phi3);
  CHECK(r.cond_ii);
  CHECK(r.cond_iii);
  CHECK(r.implication_ok);

  std::mt19937_64 rng(99021);
  std::uniform_int_distribution<int> n_atoms(3, 24);
  std::uniform_real_distribution<double> log_mass(-8.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = n_atoms(rng);
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) {
      atoms.push_back({"a" + std::to_string(i), std::exp(log_mass(rng)), i});
    }
    const auto sp = MeasureSpace::atomic(std::move(atoms));
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::unordered_map<std::string, std::string> table;
    for (int i = 0; i < n; ++i) {
      table["a" + std::to_string(i)] = "a" + std::to_string(pick(rng));
    }
    const auto t = Transformation::from_atom_table(std::move(table));
    const auto rr = comp_condition_chain(t, sp, phi1, phi2, phi3);
    REQUIRE(rr.implication_ok);
  }
}

TEST_CASE("sandwich inequalities hold with grid constants", "[operators][comp]") {
  // Identity map, power 2, f = {1, 2, 3} on masses {1/2, 1/4, 1/8}: the
  // multiplier is the constant sqrt(2), so the right norm is sqrt(2) times
  // the left one and both inequalities are sharp.
  const auto space = three_halving_atoms();
  const auto t = identity_on(space);
  const auto f = MeasurableFunction::from_map({{"x1", 1.0}, {"x2", 2.0}, {"x3", 3.0}});
  const auto r = comp_mult_sandwich(t, f, space, YoungFunction::power(2.0),
                                    YoungFunction::power(2.0));
  CHECK(r.ct_norm == Catch::Approx(1.145643923738960).epsilon(1e-8));
  CHECK(r.mult_norm == Catch::Approx(1.620185174601965).epsilon(1e-8));
  REQUIRE(r.b.has_value());
  REQUIRE(r.c.has_value());
  CHECK(*r.b >= 1.0 / std::sqrt(2.0) - 1e-9);
  CHECK(*r.c >= 2.0 - 1e-9);
  REQUIRE(r.first_holds.has_value());
  REQUIRE(r.second_holds.has_value());
  CHECK(*r.first_holds);
  CHECK(*r.second_holds);
  CHECK(r.holds);
}

TEST_CASE("sandwich inequalities hold across random finite instances",
          "[operators][comp][prop]") {
  const auto phi = YoungFunction::power(2.0);
  std::mt19937_64 rng(461207);
  std::uniform_int_distribution<int> n_atoms(2, 12);
  std::uniform_real_distribution<double> log_mass(-4.0, 2.0);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::bernoulli_distribution collapse(0.5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = n_atoms(rng);
    std::vector<Atom> atoms;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
      atoms.push_back({"a" + std::to_string(i), std::exp(log_mass(rng)), i});
      values.push_back(val(rng));
    }
    const auto sp = MeasureSpace::atomic(std::move(atoms));
    std::unordered_map<std::string, std::string> table;
    if (collapse(rng)) {
      std::uniform_int_distribution<int> pick(0, n - 1);
      for (int i = 0; i < n; ++i) {
        table["a" + std::to_string(i)] = "a" + std::to_string(pick(rng));
      }
    } else {
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < n; ++i) {
        table["a" + std::to_string(i)] = "a" + std::to_string(perm[i]);
      }
    }
    const auto t = Transformation::from_atom_table(std::move(table));
    const auto f = MeasurableFunction::from_values(sp, values);
    const auto r = comp_mult_sandwich(t, f, sp, phi, phi);
    REQUIRE(r.holds);
  }
}

TEST_CASE("composition dual membership certifies and refutes", "[operators][comp]") {
  const auto phi1 = YoungFunction::power(2.0);
  const auto phi2 = YoungFunction::power(4.0 / 3.0);
  const auto space = MeasureSpace::generated(1, 100000000, [](std::int64_t n) {
    return 1.0 / (double(n) * double(n));
  }, 10000);
  REQUIRE(space.truncated());

  const auto yes = comp_dual_membership(identity_on(space), space, phi1, phi2);
  CHECK(yes.status == Status::Certified);

  // T(n) = n^2 concentrates mass: f0 on square-indexed atoms grows like the
  // square root of the index, and the composed gauge modular diverges.
  const auto squares = Transformation::from_atom_map([](std::int64_t n) { return n * n; });
  const auto no = comp_dual_membership(squares, space, phi1, phi2);
  CHECK(no.status == Status::Refuted);
}
