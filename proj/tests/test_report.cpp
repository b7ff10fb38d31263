#include <catch2/catch_amalgamated.hpp>
#include <orlicz/config.hpp>
#include <orlicz/report.hpp>

#include <cmath>
#include <string>

using namespace orlicz;
using Catch::Matchers::WithinRel;

namespace {

AnalysisConfig parse_or_fail(const std::string& text) {
  auto result = parse_config(text);
  INFO("errors:");
  for (const auto& e : result.errors) UNSCOPED_INFO("  line " << e.line << ": " << e.message);
  REQUIRE(result.config.has_value());
  return *result.config;
}

Report run_text(const std::string& text, RunOverrides ov = {}) {
  return run(parse_or_fail(text), ov);
}

}  // namespace

TEST_CASE("norm requests recover the closed form on a single atom") {
  const auto report = run_text(
      "[young]\n"
      "phi = power 2\n"
      "[space]\n"
      "atom = a1 1\n"
      "[functions]\n"
      "f = 2\n"
      "[run]\n"
      "request = norm\n"
      "f = f\n"
      "phi = phi\n"
      "expect_value = 1.4142135623730951\n"
      "expect_value_tol = 1e-9\n"
      "expect_modular = 2\n");
  REQUIRE(report.entries.size() == 1);
  const auto& e = report.entries[0];
  CHECK(e.status == "Finite");
  REQUIRE(e.value.has_value());
  CHECK_THAT(*e.value, WithinRel(std::sqrt(2.0), 1e-9));
  REQUIRE(e.modular_value.has_value());
  CHECK(*e.modular_value == 2.0);
  CHECK(e.expectations_ok());
  CHECK(report.expectations_ok());
  CHECK(expectation_diff(report).empty());
}

TEST_CASE("a bounded multiplication pair is certified with its norm bound") {
  // Weight with finite l-log-l norm between the exponential-type source and
  // the power target; the certified bound is twice the weight norm.
  const auto report = run_text(
      "[young]\n"
      "phi1 = exp_power 2\n"
      "phi2 = power 2\n"
      "phi3 = l_log_l 2\n"
      "[space]\n"
      "interval = 1.2 2.5\n"
      "[functions]\n"
      "u = sqrt(x^2 - 1)\n"
      "[run]\n"
      "request = check-mult\n"
      "u = u\n"
      "phi1 = phi1\n"
      "phi2 = phi2\n"
      "phi3 = phi3\n"
      "method = sufficient\n");
  REQUIRE(report.entries.size() == 1);
  const auto& e = report.entries[0];
  CHECK(e.status == "Certified");
  REQUIRE(e.bound.has_value());
  CHECK_THAT(*e.bound, WithinRel(2.759948911420753, 1e-8));
  REQUIRE_FALSE(e.criteria.empty());
  CHECK(e.criteria[0].name == "sufficient.triple_inequality_phi2_left");
}

TEST_CASE("witness refutation reports a climbing divergence trace") {
  // 1/x^2 times the witness x gives 1/x, whose target modular diverges at the
  // left endpoint at every scale.
  const auto report = run_text(
      "[young]\n"
      "phi1 = exp_power 1\n"
      "phi2 = l_log_l 1\n"
      "[space]\n"
      "interval = 0 2\n"
      "[functions]\n"
      "u = 1 / x^2\n"
      "f = x\n"
      "[run]\n"
      "request = check-mult\n"
      "u = u\n"
      "phi1 = phi1\n"
      "phi2 = phi2\n"
      "method = witness\n"
      "witness_f = f\n");
  REQUIRE(report.entries.size() == 1);
  const auto& e = report.entries[0];
  CHECK(e.status == "Refuted");
  REQUIRE(e.witness.has_value());
  CHECK(e.witness->kind == "divergence");
  REQUIRE(e.witness->trace.size() >= 2);
  CHECK(e.witness->trace.back() > e.witness->trace.front());
}

TEST_CASE("range classification distinguishes live interval from finite atoms") {
  const std::string base =
      "[young]\n"
      "phi1 = power 4\n"
      "phi2 = power 2\n"
      "phi3 = power 4\n"
      "[space]\n"
      "interval = 1 2\n"
      "atom_mass = 1\n"
      "atom_range = 3 20\n"
      "[functions]\n"
      "u = 1 / x^1.5\n"
      "v_atoms = 1 / x^1.5\n";
  const auto report = run_text(base +
                               "[run]\n"
                               "request = classify-range\n"
                               "u = u\n"
                               "phi1 = phi1\nphi2 = phi2\nphi3 = phi3\n"
                               "regime = A\n"
                               "[run]\n"
                               "request = classify-range\n"
                               "u = v\n"
                               "phi1 = phi1\nphi2 = phi2\nphi3 = phi3\n"
                               "regime = A\n");
  REQUIRE(report.entries.size() == 2);
  CHECK(report.entries[0].status == "NotClosedRange");
  CHECK(report.entries[1].status == "FiniteRank");
  REQUIRE(report.entries[1].rank.has_value());
  CHECK(*report.entries[1].rank == 18);
}

TEST_CASE("module refusals surface without failing the whole run") {
  // Necessity between powers in the shrinking order needs the symbol to
  // vanish on the continuum; here it does not, so that module refuses while
  // the run itself still completes.
  const auto report = run_text(
      "[young]\n"
      "phi1 = power 4\n"
      "phi2 = power 2\n"
      "[space]\n"
      "interval = 1 2\n"
      "[functions]\n"
      "u = 1\n"
      "[run]\n"
      "request = check-mult\n"
      "u = u\n"
      "phi1 = phi1\n"
      "phi2 = phi2\n"
      "method = sufficient-atomic\n");
  REQUIRE(report.entries.size() == 1);
  const auto& e = report.entries[0];
  CHECK(e.status == "Refused");
  REQUIRE_FALSE(e.refusals.empty());
  CHECK(e.refusals[0].find("sufficient_atomic") != std::string::npos);
}

TEST_CASE("failed expectations produce diff lines and exit data") {
  const auto report = run_text(
      "[young]\n"
      "phi = power 2\n"
      "[space]\n"
      "atom = a1 1\n"
      "[functions]\n"
      "f = 2\n"
      "[run]\n"
      "request = norm\n"
      "label = bad guess\n"
      "f = f\n"
      "phi = phi\n"
      "expect_value = 99\n");
  CHECK_FALSE(report.expectations_ok());
  const auto diff = expectation_diff(report);
  REQUIRE(diff.size() == 1);
  CHECK(diff[0].find("bad guess") != std::string::npos);
  CHECK(diff[0].find("99") != std::string::npos);
}

TEST_CASE("machine reports are deterministic and carry no timing") {
  const std::string text =
      "[young]\n"
      "phi = power 3\n"
      "[space]\n"
      "atom_mass = 1 / n^2\n"
      "atom_range = 1 200\n"
      "[functions]\n"
      "f = 1 / x\n"
      "[run]\n"
      "request = norm\n"
      "f = f\n"
      "phi = phi\n";
  const auto a = to_machine(run_text(text));
  const auto b = to_machine(run_text(text));
  CHECK(a == b);
  CHECK(a.find("elapsed") == std::string::npos);
  CHECK(a.find("\"status\": \"Finite\"") != std::string::npos);

  const auto text_report = to_text(run_text(text));
  CHECK(text_report.find(" s)") != std::string::npos);
}

TEST_CASE("request filters select a subset and empty selections throw") {
  const std::string text =
      "[young]\n"
      "phi = power 2\n"
      "[space]\n"
      "atom = a1 1\n"
      "[functions]\n"
      "f = 1\n"
      "[run]\n"
      "request = norm\n"
      "f = f\n"
      "phi = phi\n"
      "[run]\n"
      "request = conjugate\n"
      "phi = phi\n"
      "p = 2\n";
  RunOverrides ov;
  ov.only_request = "conjugate";
  const auto report = run(parse_or_fail(text), ov);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].request == "conjugate");

  ov.only_request = "check-comp";
  CHECK_THROWS_AS(run(parse_or_fail(text), ov), PreconditionError);
}

TEST_CASE("shipped fixtures parse into the documented structures") {
  const auto result = load_config(std::string(ORLICZ_FIXTURE_DIR) + "/example_3_10.cfg");
  INFO("errors:");
  for (const auto& e : result.errors) UNSCOPED_INFO("  line " << e.line << ": " << e.message);
  REQUIRE(result.config.has_value());
  const auto& cfg = *result.config;
  REQUIRE(cfg.youngs.size() == 3);
  CHECK(cfg.youngs[0].kind == "exp_power");
  CHECK(cfg.youngs[1].kind == "power");
  CHECK(cfg.youngs[2].kind == "l_log_l");
  CHECK(cfg.space.interval_lo == 1.2);
  CHECK(cfg.space.interval_hi == 2.5);
  REQUIRE(cfg.runs.size() == 2);
  CHECK(cfg.runs[0].request == "check-mult");
  CHECK(cfg.runs[1].request == "norm");
}
