#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/expression.hpp"

namespace orlicz {

/// One validation problem, anchored to a 1-based line of the config text.
struct ConfigIssue {
  int line = 0;
  std::string message;
};

struct YoungSpec {
  std::string name;
  std::string kind;  // power | exp_power | l_log_l | custom
  double param = 0.0;
  std::optional<Expression> formula;  // custom only, in x
  int line = 0;
};

struct AtomSpec {
  std::string id;
  double mass = 0.0;
  std::int64_t index = 0;
  int line = 0;
};

/// Either an explicit atom list or a generated family, plus an optional
/// interval. `atom_point` maps the family index to the coordinate at which
/// function formulas are evaluated on that atom (default: the index itself).
struct SpaceSpec {
  std::vector<AtomSpec> atoms;
  std::optional<Expression> atom_mass;  // generator mode, in n
  std::int64_t atom_first = 0;
  std::int64_t atom_last = 0;
  std::int64_t atom_budget = 100000;
  std::optional<Expression> atom_point;  // in n
  std::optional<double> interval_lo;
  std::optional<double> interval_hi;
  std::optional<Expression> density;  // in x
};

/// A function formula in x, evaluated on the interval directly and on atoms
/// at the atom's coordinate. Per-part overrides replace the shared formula;
/// a missing interval formula means identically zero there.
struct FunctionSpec {
  std::string name;
  std::optional<Expression> everywhere;
  std::optional<Expression> on_interval;
  std::optional<Expression> on_atoms;
  int line = 0;
};

struct TransformSpec {
  std::string name;
  std::optional<Expression> atom_map;     // in n, rounded to the nearest index
  std::optional<Expression> forward;      // in x
  std::optional<Expression> pushforward;  // in x, density of the image measure
  int line = 0;
};

/// One analysis request. Reference and tuning keys stay as raw strings here;
/// the report layer interprets them per request type. `expect_*` keys are
/// collected with the prefix stripped.
struct RunSpec {
  std::string request;  // conjugate | norm | check-mult | check-comp | classify-range
  std::string label;
  std::map<std::string, std::string> keys;
  std::map<std::string, std::string> expectations;
  int line = 0;
};

struct AnalysisConfig {
  std::vector<YoungSpec> youngs;
  SpaceSpec space;
  std::vector<FunctionSpec> functions;
  std::vector<TransformSpec> transforms;
  std::vector<RunSpec> runs;
};

/// `config` is set exactly when `errors` is empty. Parsing collects every
/// problem it can find rather than stopping at the first.
struct ParseResult {
  std::optional<AnalysisConfig> config;
  std::vector<ConfigIssue> errors;
};

/// Parses the documented INI-style format: sections [young], [space],
/// [functions], [transform], and one [run] section per request, with
/// key = value lines, and # or ; comments. All references (young names,
/// function names, transform names) are resolved here; formulas are
/// compiled; budgets and masses are range-checked.
[[nodiscard]] ParseResult parse_config(const std::string& text);

/// Reads the file and delegates to parse_config; unreadable files come back
/// as a single issue on line 0.
[[nodiscard]] ParseResult load_config(const std::string& path);

}  // namespace orlicz
