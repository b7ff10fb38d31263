#include <catch2/catch_amalgamated.hpp>
#include <orlicz/config.hpp>

#include <string>

using namespace orlicz;

namespace {

AnalysisConfig parse_ok(const std::string& text) {
  auto result = parse_config(text);
  INFO("errors:");
  for (const auto& e : result.errors) UNSCOPED_INFO("  line " << e.line << ": " << e.message);
  REQUIRE(result.errors.empty());
  REQUIRE(result.config.has_value());
  return *result.config;
}

std::vector<ConfigIssue> parse_errors(const std::string& text) {
  auto result = parse_config(text);
  REQUIRE_FALSE(result.errors.empty());
  REQUIRE_FALSE(result.config.has_value());
  return result.errors;
}

bool mentions(const std::vector<ConfigIssue>& errors, const std::string& needle, int line) {
  for (const auto& e : errors) {
    if (e.line == line && e.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("minimal config parses into the documented shape") {
  const auto cfg = parse_ok(
      "# comment\n"
      "[young]\n"
      "phi = power 2  ; trailing comment\n"
      "\n"
      "[space]\n"
      "atom = a1 0.5\n"
      "atom = a2 0.25 7\n"
      "\n"
      "[functions]\n"
      "f = 2 * x\n"
      "\n"
      "[run]\n"
      "request = norm\n"
      "f = f\n"
      "phi = phi\n");
  REQUIRE(cfg.youngs.size() == 1);
  CHECK(cfg.youngs[0].name == "phi");
  CHECK(cfg.youngs[0].kind == "power");
  CHECK(cfg.youngs[0].param == 2.0);
  REQUIRE(cfg.space.atoms.size() == 2);
  CHECK(cfg.space.atoms[0].id == "a1");
  CHECK(cfg.space.atoms[0].mass == 0.5);
  CHECK(cfg.space.atoms[0].index == 1);  // defaults to its position
  CHECK(cfg.space.atoms[1].index == 7);
  CHECK_FALSE(cfg.space.interval_lo.has_value());
  REQUIRE(cfg.functions.size() == 1);
  REQUIRE(cfg.functions[0].everywhere.has_value());
  CHECK((*cfg.functions[0].everywhere)(3.0) == 6.0);
  REQUIRE(cfg.runs.size() == 1);
  CHECK(cfg.runs[0].request == "norm");
  CHECK(cfg.runs[0].label == "run1");
  CHECK(cfg.runs[0].keys.at("f") == "f");
  CHECK(cfg.runs[0].expectations.empty());
}

TEST_CASE("generated families and intervals parse") {
  const auto cfg = parse_ok(
      "[young]\n"
      "phi = l_log_l 2\n"
      "[space]\n"
      "interval = 0 2\n"
      "atom_mass = 1 / n^3\n"
      "atom_range = 3 50\n"
      "atom_point = ln(n)\n"
      "[functions]\n"
      "u = 1 / x^2\n"
      "u_atoms = 42\n"
      "[run]\n"
      "request = norm\n"
      "label = weight\n"
      "f = u\n"
      "phi = phi\n"
      "expect_status = Finite\n");
  CHECK(cfg.space.interval_lo == 0.0);
  CHECK(cfg.space.interval_hi == 2.0);
  REQUIRE(cfg.space.atom_mass.has_value());
  CHECK((*cfg.space.atom_mass)(2.0) == 0.125);
  CHECK(cfg.space.atom_first == 3);
  CHECK(cfg.space.atom_last == 50);
  REQUIRE(cfg.space.atom_point.has_value());
  REQUIRE(cfg.functions.size() == 1);
  CHECK(cfg.functions[0].everywhere.has_value());
  REQUIRE(cfg.functions[0].on_atoms.has_value());
  CHECK((*cfg.functions[0].on_atoms)(0.0) == 42.0);
  CHECK(cfg.runs[0].label == "weight");
  CHECK(cfg.runs[0].expectations.at("status") == "Finite");
}

TEST_CASE("all errors are collected with line numbers") {
  const auto errors = parse_errors(
      "[young]\n"
      "phi1 = power 0.5\n"
      "phi2 = mystery 2\n"
      "[space]\n"
      "atom = a1 -1\n"
      "[functions]\n"
      "u = 1/x^ + 2\n"
      "[run]\n"
      "request = fly\n");
  CHECK(errors.size() >= 4);
  CHECK(mentions(errors, "out of range", 2));
  CHECK(mentions(errors, "unknown Young function kind", 3));
  CHECK(mentions(errors, "mass", 5));
  CHECK(mentions(errors, "unexpected character", 7));
  CHECK(mentions(errors, "unknown request", 8));
}

TEST_CASE("dangling references are rejected") {
  const auto errors = parse_errors(
      "[young]\n"
      "phi = power 2\n"
      "[space]\n"
      "atom = a1 1\n"
      "[run]\n"
      "request = norm\n"
      "f = ghost\n"
      "phi = phi\n");
  CHECK(mentions(errors, "ghost", 5));
}

TEST_CASE("space shape is validated") {
  CHECK(mentions(parse_errors("[young]\n"
                              "phi = power 2\n"
                              "[space]\n"
                              "atom = a1 1\n"
                              "atom_mass = 1/n\n"
                              "atom_range = 1 5\n"
                              "[run]\n"
                              "request = conjugate\n"
                              "phi = phi\n"
                              "p = 2\n"),
                 "mixes explicit atoms", 0));
  CHECK(mentions(parse_errors("[young]\n"
                              "phi = power 2\n"
                              "[space]\n"
                              "atom_range = 1 5\n"
                              "[run]\n"
                              "request = conjugate\n"
                              "phi = phi\n"
                              "p = 2\n"),
                 "atom_mass", 0));
  CHECK(mentions(parse_errors("[young]\n"
                              "phi = power 2\n"
                              "[space]\n"
                              "interval = 3 1\n"
                              "[run]\n"
                              "request = conjugate\n"
                              "phi = phi\n"
                              "p = 2\n"),
                 "interval", 4));
}

TEST_CASE("run sections know their request vocabulary") {
  // classify-range needs exactly one of u / transform.
  const std::string base =
      "[young]\n"
      "phi = power 2\n"
      "[space]\n"
      "atom = a1 1\n"
      "[functions]\n"
      "u = x\n";
  CHECK(mentions(parse_errors(base +
                              "[run]\n"
                              "request = classify-range\n"
                              "phi1 = phi\nphi2 = phi\nphi3 = phi\n"
                              "regime = A\n"),
                 "exactly one", 7));
  CHECK(mentions(parse_errors(base +
                              "[run]\n"
                              "request = norm\n"
                              "f = u\n"
                              "phi = phi\n"
                              "volume = 3\n"),
                 "does not accept key 'volume'", 7));
  CHECK(mentions(parse_errors(base +
                              "[run]\n"
                              "request = norm\n"
                              "f = u\n"
                              "phi = phi\n"
                              "expect_rank = 2.5\n"),
                 "integer", 7));
}

TEST_CASE("expectation keys parse and strip their prefix") {
  const auto cfg = parse_ok(
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
      "expect_value = 1.5\n"
      "expect_value_tol = 1e-6\n");
  CHECK(cfg.runs[0].expectations.at("value") == "1.5");
  CHECK(cfg.runs[0].expectations.at("value_tol") == "1e-6");
}
