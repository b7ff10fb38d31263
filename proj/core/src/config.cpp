#include "orlicz/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace orlicz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  const auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && std::isfinite(out);
}

bool parse_int(const std::string& tok, std::int64_t& out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  const auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e;
}

// Collects issues and assembles the config; `take` yields a config only when
// no issue was recorded.
class Builder {
 public:
  void parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::string section;
    while (std::getline(in, raw)) {
      ++line;
      const auto cut = raw.find_first_of("#;");
      std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') {
          issue(line, "malformed section header");
          continue;
        }
        section = trim(s.substr(1, s.size() - 2));
        open_section(section, line);
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        issue(line, "expected key = value");
        continue;
      }
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty() || key.find_first_of(" \t") != std::string::npos) {
        issue(line, "malformed key '" + key + "'");
        continue;
      }
      if (value.empty()) {
        issue(line, "empty value for '" + key + "'");
        continue;
      }
      dispatch(section, key, value, line);
    }
    validate();
  }

  ParseResult take() {
    ParseResult r;
    r.errors = std::move(errors_);
    if (r.errors.empty()) r.config = std::move(cfg_);
    return r;
  }

 private:
  void issue(int line, std::string message) { errors_.push_back({line, std::move(message)}); }

  void open_section(const std::string& name, int line) {
    if (name == "young" || name == "space" || name == "functions") return;
    if (name == "transform") {
      cfg_.transforms.push_back({});
      cfg_.transforms.back().line = line;
      return;
    }
    if (name == "run") {
      cfg_.runs.push_back({});
      cfg_.runs.back().line = line;
      cfg_.runs.back().label = "run" + std::to_string(cfg_.runs.size());
      return;
    }
    issue(line, "unknown section [" + name + "]");
  }

  std::optional<Expression> compile(const std::string& text, const std::string& want_var,
                                    const std::string& what, int line) {
    try {
      Expression e = Expression::parse(text);
      if (!e.constant() && e.variable() != want_var) {
        issue(line, what + " uses variable '" + e.variable() + "', expected '" + want_var + "'");
        return std::nullopt;
      }
      return e;
    } catch (const ExpressionError& err) {
      issue(line, what + ": " + err.what() + " at position " + std::to_string(err.offset));
      return std::nullopt;
    }
  }

  void dispatch(const std::string& section, const std::string& key, const std::string& value,
                int line) {
    if (section == "young") {
      young_key(key, value, line);
    } else if (section == "space") {
      space_key(key, value, line);
    } else if (section == "functions") {
      function_key(key, value, line);
    } else if (section == "transform") {
      if (cfg_.transforms.empty()) {
        issue(line, "key outside any [transform] section");
        return;
      }
      transform_key(cfg_.transforms.back(), key, value, line);
    } else if (section == "run") {
      if (cfg_.runs.empty()) {
        issue(line, "key outside any [run] section");
        return;
      }
      run_key(cfg_.runs.back(), key, value, line);
    } else {
      issue(line, "key '" + key + "' before any section");
    }
  }

  void young_key(const std::string& name, const std::string& value, int line) {
    for (const auto& y : cfg_.youngs) {
      if (y.name == name) {
        issue(line, "duplicate Young function '" + name + "'");
        return;
      }
    }
    YoungSpec spec;
    spec.name = name;
    spec.line = line;
    const auto tokens = split_ws(value);
    spec.kind = tokens.empty() ? "" : tokens[0];
    if (spec.kind == "power" || spec.kind == "exp_power" || spec.kind == "l_log_l") {
      if (tokens.size() != 2 || !parse_double(tokens[1], spec.param)) {
        issue(line, "'" + spec.kind + "' needs one numeric parameter");
        return;
      }
      const double min_p = spec.kind == "power" ? 1.0 : 1.0;
      const bool strict = spec.kind == "power";
      if (strict ? !(spec.param > min_p) : !(spec.param >= min_p)) {
        issue(line, "'" + spec.kind + "' parameter out of range: " + tokens[1]);
        return;
      }
    } else if (spec.kind == "custom") {
      const auto pos = value.find("custom");
      const std::string expr = trim(value.substr(pos + 6));
      if (expr.empty()) {
        issue(line, "'custom' needs a formula in x");
        return;
      }
      spec.formula = compile(expr, "x", "Young function '" + name + "'", line);
      if (!spec.formula) return;
    } else {
      issue(line, "unknown Young function kind '" + spec.kind + "'");
      return;
    }
    cfg_.youngs.push_back(std::move(spec));
  }

  void space_key(const std::string& key, const std::string& value, int line) {
    SpaceSpec& sp = cfg_.space;
    if (key == "atom") {
      const auto tokens = split_ws(value);
      AtomSpec a;
      a.line = line;
      a.index = static_cast<std::int64_t>(sp.atoms.size()) + 1;
      if (tokens.size() < 2 || tokens.size() > 3 || !parse_double(tokens[1], a.mass)) {
        issue(line, "atom needs 'id mass' or 'id mass index'");
        return;
      }
      a.id = tokens[0];
      if (tokens.size() == 3 && !parse_int(tokens[2], a.index)) {
        issue(line, "atom index must be an integer");
        return;
      }
      if (!(a.mass > 0.0)) {
        issue(line, "atom '" + a.id + "' needs positive mass");
        return;
      }
      for (const auto& other : sp.atoms) {
        if (other.id == a.id) {
          issue(line, "duplicate atom id '" + a.id + "'");
          return;
        }
      }
      sp.atoms.push_back(std::move(a));
      return;
    }
    if (key == "atom_mass") {
      if (sp.atom_mass) return issue(line, "duplicate key 'atom_mass'");
      sp.atom_mass = compile(value, "n", "atom_mass", line);
      return;
    }
    if (key == "atom_range") {
      const auto tokens = split_ws(value);
      if (tokens.size() != 2 || !parse_int(tokens[0], sp.atom_first) ||
          !parse_int(tokens[1], sp.atom_last) || sp.atom_last < sp.atom_first) {
        issue(line, "atom_range needs 'first last' with first <= last");
      } else {
        has_range_ = true;
      }
      return;
    }
    if (key == "atom_budget") {
      if (!parse_int(value, sp.atom_budget) || sp.atom_budget < 1) {
        issue(line, "atom_budget must be a positive integer");
      }
      return;
    }
    if (key == "atom_point") {
      if (sp.atom_point) return issue(line, "duplicate key 'atom_point'");
      sp.atom_point = compile(value, "n", "atom_point", line);
      return;
    }
    if (key == "interval") {
      if (sp.interval_lo) return issue(line, "duplicate key 'interval'");
      const auto tokens = split_ws(value);
      double lo = 0.0;
      double hi = 0.0;
      if (tokens.size() != 2 || !parse_double(tokens[0], lo) || !parse_double(tokens[1], hi) ||
          !(lo < hi)) {
        issue(line, "interval needs 'lo hi' with lo < hi");
        return;
      }
      sp.interval_lo = lo;
      sp.interval_hi = hi;
      return;
    }
    if (key == "density") {
      if (sp.density) return issue(line, "duplicate key 'density'");
      sp.density = compile(value, "x", "density", line);
      return;
    }
    issue(line, "unknown [space] key '" + key + "'");
  }

  void function_key(const std::string& key, const std::string& value, int line) {
    std::string base = key;
    std::optional<Expression>* slot = nullptr;
    if (key.size() > 9 && key.rfind("_interval") == key.size() - 9) {
      base = key.substr(0, key.size() - 9);
    } else if (key.size() > 6 && key.rfind("_atoms") == key.size() - 6) {
      base = key.substr(0, key.size() - 6);
    }
    FunctionSpec* spec = nullptr;
    for (auto& f : cfg_.functions) {
      if (f.name == base) spec = &f;
    }
    if (!spec) {
      cfg_.functions.push_back({});
      spec = &cfg_.functions.back();
      spec->name = base;
      spec->line = line;
    }
    if (base == key) {
      slot = &spec->everywhere;
    } else if (key.rfind("_interval") != std::string::npos) {
      slot = &spec->on_interval;
    } else {
      slot = &spec->on_atoms;
    }
    if (*slot) return issue(line, "duplicate function key '" + key + "'");
    *slot = compile(value, "x", "function '" + key + "'", line);
  }

  void transform_key(TransformSpec& t, const std::string& key, const std::string& value,
                     int line) {
    if (key == "name") {
      t.name = value;
      return;
    }
    if (key == "atom_map") {
      if (t.atom_map) return issue(line, "duplicate key 'atom_map'");
      t.atom_map = compile(value, "n", "atom_map", line);
      return;
    }
    if (key == "forward") {
      if (t.forward) return issue(line, "duplicate key 'forward'");
      t.forward = compile(value, "x", "forward", line);
      return;
    }
    if (key == "pushforward") {
      if (t.pushforward) return issue(line, "duplicate key 'pushforward'");
      t.pushforward = compile(value, "x", "pushforward", line);
      return;
    }
    issue(line, "unknown [transform] key '" + key + "'");
  }

  void run_key(RunSpec& run, const std::string& key, const std::string& value, int line) {
    if (key == "request") {
      run.request = value;
      return;
    }
    if (key == "label") {
      run.label = value;
      return;
    }
    if (key.rfind("expect_", 0) == 0) {
      const std::string name = key.substr(7);
      if (!run.expectations.emplace(name, value).second) {
        issue(line, "duplicate expectation '" + key + "'");
      }
      return;
    }
    if (!run.keys.emplace(key, value).second) {
      issue(line, "duplicate key '" + key + "' in [run]");
    }
  }

  // Cross-reference and shape checks, after the whole text is read.
  void validate() {
    if (cfg_.runs.empty()) errors_.push_back({0, "config declares no [run] sections"});

    SpaceSpec& sp = cfg_.space;
    const bool explicit_atoms = !sp.atoms.empty();
    const bool generated = sp.atom_mass.has_value() || has_range_;
    if (explicit_atoms && generated) {
      errors_.push_back({0, "[space] mixes explicit atoms with a generator"});
    }
    if (generated && (!sp.atom_mass.has_value() || !has_range_)) {
      errors_.push_back({0, "[space] generator needs both atom_mass and atom_range"});
    }
    if (!explicit_atoms && !generated && !sp.interval_lo.has_value()) {
      errors_.push_back({0, "[space] is empty: no atoms and no interval"});
    }
    if (sp.density && !sp.interval_lo) {
      errors_.push_back({0, "[space] density given without an interval"});
    }

    std::set<std::string> tnames;
    for (auto& t : cfg_.transforms) {
      if (t.name.empty()) t.name = "t";
      if (!tnames.insert(t.name).second) {
        errors_.push_back({t.line, "duplicate transform name '" + t.name + "'"});
      }
      if (!t.atom_map && !t.forward) {
        errors_.push_back({t.line, "transform '" + t.name + "' has no atom_map and no forward"});
      }
      if (t.forward.has_value() != t.pushforward.has_value()) {
        errors_.push_back(
            {t.line, "transform '" + t.name + "' needs forward and pushforward together"});
      }
    }

    for (const auto& run : cfg_.runs) validate_run(run);
  }

  [[nodiscard]] bool has_young(const std::string& name) const {
    return std::any_of(cfg_.youngs.begin(), cfg_.youngs.end(),
                       [&](const YoungSpec& y) { return y.name == name; });
  }
  [[nodiscard]] bool has_function(const std::string& name) const {
    return std::any_of(cfg_.functions.begin(), cfg_.functions.end(),
                       [&](const FunctionSpec& f) { return f.name == name; });
  }
  [[nodiscard]] bool has_transform(const std::string& name) const {
    return std::any_of(cfg_.transforms.begin(), cfg_.transforms.end(),
                       [&](const TransformSpec& t) { return t.name == name; });
  }

  void check_ref(const RunSpec& run, const char* key, bool required, bool (Builder::*find)(
                     const std::string&) const, const char* pool) {
    const auto it = run.keys.find(key);
    if (it == run.keys.end()) {
      if (required) {
        errors_.push_back({run.line, "[run] '" + run.label + "' (" + run.request +
                                         ") is missing required key '" + key + "'"});
      }
      return;
    }
    if (!(this->*find)(it->second)) {
      errors_.push_back({run.line, "[run] '" + run.label + "': " + key + " references unknown " +
                                       pool + " '" + it->second + "'"});
    }
  }

  void check_number(const RunSpec& run, const char* key) {
    const auto it = run.keys.find(key);
    double v = 0.0;
    if (it != run.keys.end() && !parse_double(it->second, v)) {
      errors_.push_back(
          {run.line, "[run] '" + run.label + "': " + key + " must be a number, got '" +
                         it->second + "'"});
    }
  }

  void validate_run(const RunSpec& run) {
    static const std::set<std::string> kRequests = {"conjugate", "norm", "check-mult",
                                                    "check-comp", "classify-range"};
    if (!kRequests.count(run.request)) {
      errors_.push_back({run.line, "[run] '" + run.label + "' has unknown request '" +
                                       run.request + "'"});
      return;
    }

    static const std::map<std::string, std::set<std::string>> kKeys = {
        {"conjugate", {"phi", "p", "tol"}},
        {"norm", {"f", "phi", "scale", "tol", "threshold"}},
        {"check-mult", {"u", "phi1", "phi2", "phi3", "method", "witness_f", "tol", "threshold"}},
        {"check-comp", {"transform", "phi1", "phi2", "phi3", "method", "f", "tol", "threshold"}},
        {"classify-range",
         {"u", "transform", "phi1", "phi2", "phi3", "regime", "threshold", "tol"}},
    };
    const auto& allowed = kKeys.at(run.request);
    for (const auto& [key, value] : run.keys) {
      if (!allowed.count(key)) {
        errors_.push_back({run.line, "[run] '" + run.label + "' (" + run.request +
                                         ") does not accept key '" + key + "'"});
      }
    }

    static const std::set<std::string> kExpect = {
        "status", "bound",         "bound_tol", "value",        "value_tol", "modular",
        "modular_tol", "classification", "rank", "witness_kind"};
    for (const auto& [name, value] : run.expectations) {
      if (!kExpect.count(name)) {
        errors_.push_back(
            {run.line, "[run] '" + run.label + "' has unknown expectation 'expect_" + name + "'"});
        continue;
      }
      if (name == "rank") {
        std::int64_t r = 0;
        if (!parse_int(value, r) || r < 0) {
          errors_.push_back({run.line, "[run] '" + run.label + "': expect_rank must be a "
                                       "nonnegative integer"});
        }
      } else if (name != "status" && name != "classification" && name != "witness_kind") {
        double v = 0.0;
        if (!parse_double(value, v)) {
          errors_.push_back({run.line, "[run] '" + run.label + "': expect_" + name +
                                           " must be a number, got '" + value + "'"});
        }
      }
    }

    check_number(run, "p");
    check_number(run, "tol");
    check_number(run, "threshold");
    check_number(run, "scale");

    if (run.request == "conjugate") {
      check_ref(run, "phi", true, &Builder::has_young, "Young function");
      if (!run.keys.count("p")) {
        errors_.push_back({run.line, "[run] '" + run.label + "': conjugate needs key 'p'"});
      }
    } else if (run.request == "norm") {
      check_ref(run, "f", true, &Builder::has_function, "function");
      check_ref(run, "phi", true, &Builder::has_young, "Young function");
    } else if (run.request == "check-mult") {
      check_ref(run, "u", true, &Builder::has_function, "function");
      check_ref(run, "phi1", true, &Builder::has_young, "Young function");
      check_ref(run, "phi2", true, &Builder::has_young, "Young function");
      check_ref(run, "phi3", false, &Builder::has_young, "Young function");
      check_ref(run, "witness_f", false, &Builder::has_function, "function");
      check_method(run, {"auto", "sufficient", "sufficient-atomic", "necessary", "dual",
                         "witness"});
      const std::string method = method_of(run);
      if ((method == "sufficient" || method == "necessary") && !run.keys.count("phi3")) {
        errors_.push_back(
            {run.line, "[run] '" + run.label + "': method '" + method + "' needs phi3"});
      }
      if (method == "witness" && !run.keys.count("witness_f")) {
        errors_.push_back({run.line, "[run] '" + run.label + "': method 'witness' needs "
                                     "witness_f"});
      }
    } else if (run.request == "check-comp") {
      check_ref(run, "transform", true, &Builder::has_transform, "transform");
      check_ref(run, "phi1", true, &Builder::has_young, "Young function");
      check_ref(run, "phi2", true, &Builder::has_young, "Young function");
      check_ref(run, "phi3", false, &Builder::has_young, "Young function");
      check_ref(run, "f", false, &Builder::has_function, "function");
      check_method(run, {"auto", "necessary", "sufficient-atomic", "dual", "chain", "sandwich"});
      const std::string method = method_of(run);
      if (method == "chain" && !run.keys.count("phi3")) {
        errors_.push_back({run.line, "[run] '" + run.label + "': method 'chain' needs phi3"});
      }
      if (method == "sandwich" && !run.keys.count("f")) {
        errors_.push_back({run.line, "[run] '" + run.label + "': method 'sandwich' needs f"});
      }
    } else if (run.request == "classify-range") {
      const bool has_u = run.keys.count("u") > 0;
      const bool has_t = run.keys.count("transform") > 0;
      if (has_u == has_t) {
        errors_.push_back({run.line, "[run] '" + run.label + "': classify-range needs exactly "
                                     "one of 'u' or 'transform'"});
      }
      check_ref(run, "u", false, &Builder::has_function, "function");
      check_ref(run, "transform", false, &Builder::has_transform, "transform");
      check_ref(run, "phi1", true, &Builder::has_young, "Young function");
      check_ref(run, "phi2", true, &Builder::has_young, "Young function");
      check_ref(run, "phi3", true, &Builder::has_young, "Young function");
      const auto it = run.keys.find("regime");
      if (it == run.keys.end() || (it->second != "A" && it->second != "B")) {
        errors_.push_back(
            {run.line, "[run] '" + run.label + "': classify-range needs regime = A or B"});
      }
    }
  }

  [[nodiscard]] static std::string method_of(const RunSpec& run) {
    const auto it = run.keys.find("method");
    return it == run.keys.end() ? "auto" : it->second;
  }

  void check_method(const RunSpec& run, const std::set<std::string>& allowed) {
    const std::string method = method_of(run);
    if (!allowed.count(method)) {
      errors_.push_back(
          {run.line, "[run] '" + run.label + "' has unknown method '" + method + "'"});
    }
  }

  AnalysisConfig cfg_;
  std::vector<ConfigIssue> errors_;
  bool has_range_ = false;
};

}  // namespace

ParseResult parse_config(const std::string& text) {
  Builder b;
  b.parse(text);
  return b.take();
}

ParseResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back({0, "cannot read config file '" + path + "'"});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace orlicz
