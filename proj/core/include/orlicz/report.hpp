#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/config.hpp"
#include "orlicz/operators.hpp"

namespace orlicz {

/// One embedded expectation compared against the produced entry.
struct ExpectationCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool ok = false;
};

/// The outcome of one [run] request. `status` uses the stable enum
/// spellings of the core library (Certified, Refuted, Inconclusive,
/// FiniteRank, ClosedRange, NotClosedRange) plus Finite, Diverged, Holds,
/// Violated, Refused, Conflict, and Error for the request-level states.
/// `criteria` merges the criteria logs of every check that ran, each name
/// prefixed with the check it came from. `refusals` lists checks whose
/// stated hypotheses failed their grid certificates; a refusal never aborts
/// the run. `elapsed_seconds` appears only in the text rendering.
struct RequestReport {
  std::string request;
  std::string label;
  std::string status = "Error";
  std::optional<double> bound;
  std::optional<double> value;
  std::optional<double> modular_value;
  std::optional<int> rank;
  std::optional<Witness> witness;
  std::vector<CriterionEntry> criteria;
  std::vector<std::string> refusals;
  std::vector<std::string> notes;
  std::vector<ExpectationCheck> expectations;
  double elapsed_seconds = 0.0;

  [[nodiscard]] bool expectations_ok() const;
};

struct Report {
  std::string source;
  std::uint64_t seed = 0;
  std::vector<RequestReport> entries;

  [[nodiscard]] bool expectations_ok() const;
};

/// Command-line overrides layered on top of a parsed config.
struct RunOverrides {
  std::string source = "<config>";
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<double> threshold;
  std::optional<std::int64_t> budget_n;
  std::optional<std::string> only_request;
};

/// Executes every request (or the `only_request` subset) against a
/// materialized space. Requests run concurrently; the report is assembled
/// in declaration order, so identical configs and seeds produce identical
/// machine output. Throws PreconditionError when the space or a Young
/// function cannot be materialized, or when the request filter matches
/// nothing; any failure inside a single request is captured in its entry.
[[nodiscard]] Report run(const AnalysisConfig& cfg, const RunOverrides& overrides = {});

/// Human-readable rendering, including timing.
[[nodiscard]] std::string to_text(const Report& report);

/// Canonical machine rendering: stable key order, no timing fields.
[[nodiscard]] std::string to_machine(const Report& report);

/// One line per failed expectation across all entries; empty means pass.
[[nodiscard]] std::vector<std::string> expectation_diff(const Report& report);

}  // namespace orlicz
