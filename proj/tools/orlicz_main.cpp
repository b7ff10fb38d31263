// Command line front end: config-driven analyses plus the shipped example
// reproductions. Exit status: 0 all requests completed, 1 config or setup
// error, 2 expectation mismatch.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "orlicz/config.hpp"
#include "orlicz/report.hpp"

#ifndef ORLICZ_FIXTURE_DIR
#define ORLICZ_FIXTURE_DIR "fixtures"
#endif

namespace {

std::string example_file(const std::string& name) {
  std::string file = name;
  for (char& c : file) {
    if (c == '.') c = '_';
  }
  return "example_" + file + ".cfg";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz space operator toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "text";
  std::string example;
  std::string fixtures_dir = ORLICZ_FIXTURE_DIR;
  double tol = 0.0;
  double threshold = 0.0;
  std::int64_t budget_n = 0;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", config_path, "config file to run")->required();
    }
    cmd->add_option("--tol", tol, "tolerance override for norms and conjugates");
    cmd->add_option("--budget-n", budget_n, "atom materialization budget override");
    cmd->add_option("--threshold", threshold, "divergence threshold override");
    cmd->add_option("--seed", seed, "seed recorded in the report");
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
    cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "machine"}));
  };

  for (const char* name : {"conjugate", "norm", "check-mult", "check-comp", "classify-range"}) {
    add_common(app.add_subcommand(name, std::string("run the ") + name + " requests of a config"),
               true);
  }
  CLI::App* rep = app.add_subcommand("reproduce-example", "run a shipped example fixture");
  rep->add_option("name", example, "one of 3.9, 3.10, 3.11, 3.12")->required();
  rep->add_option("--fixtures", fixtures_dir, "directory holding the example fixtures");
  add_common(rep, false);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  std::optional<std::string> only;
  std::string path = config_path;
  if (command == "reproduce-example") {
    if (example != "3.9" && example != "3.10" && example != "3.11" && example != "3.12") {
      std::cerr << "unknown example '" << example << "'; expected 3.9, 3.10, 3.11 or 3.12\n";
      return 1;
    }
    path = fixtures_dir + "/" + example_file(example);
  } else {
    only = command;
  }

  const orlicz::ParseResult parsed = orlicz::load_config(path);
  if (!parsed.config) {
    for (const auto& issue : parsed.errors) {
      std::cerr << path << ":" << issue.line << ": " << issue.message << "\n";
    }
    return 1;
  }

  orlicz::RunOverrides overrides;
  overrides.source = path;
  overrides.seed = seed;
  overrides.only_request = only;
  if (tol > 0.0) overrides.tol = tol;
  if (threshold > 0.0) overrides.threshold = threshold;
  if (budget_n > 0) overrides.budget_n = budget_n;

  orlicz::Report report;
  try {
    report = orlicz::run(*parsed.config, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string rendered =
      format == "machine" ? orlicz::to_machine(report) : orlicz::to_text(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return 1;
    }
    out << rendered;
  } else {
    std::cout << rendered;
  }

  const auto diff = orlicz::expectation_diff(report);
  if (!diff.empty()) {
    for (const auto& line : diff) std::cerr << "mismatch: " << line << "\n";
    return 2;
  }
  return 0;
}
