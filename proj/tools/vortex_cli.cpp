// vortexchoreo: batch front end for equilibria, periodic families, resonant
// orbits and choreographies of point vortices.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vortex/scenario.hpp"

namespace fs = std::filesystem;
using namespace vortex;

namespace {

constexpr int kOk = 0, kConfig = 1, kNumeric = 2;

struct RunArgs {
  std::string config, out;
  int threads = 1;
  std::vector<std::string> overrides;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "scenario file (JSON)")->required();
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->add_option("--threads", a.threads, "workers for scenarios with several modes")->check(CLI::PositiveNumber);
  cmd->add_option("--override", a.overrides, "key=value applied to the scenario before validation")
      ->take_all();
}

// All files land in a sibling staging directory first; it is renamed into
// place when the output directory is new, otherwise files are moved one by
// one. A failed run leaves nothing behind.
void publish(const RunOutput& result, const std::string& out) {
  const fs::path target(out);
  fs::path staging = target;
  staging += ".partial";
  fs::remove_all(staging);
  try {
    for (const auto& [rel, text] : result.files) write_file_atomic((staging / rel).string(), text);
    if (!fs::exists(target)) {
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      fs::rename(staging, target);
      return;
    }
    for (const auto& [rel, text] : result.files) {
      const fs::path dst = target / rel;
      fs::create_directories(dst.parent_path());
      fs::rename(staging / rel, dst);
    }
    fs::remove_all(staging);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
}

int run(const RunArgs& a, Depth depth) {
  Scenario s;
  try {
    s = load_scenario(a.config, a.overrides);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  }
  RunOutput result;
  try {
    result = run_scenario(s, depth, a.threads);
  } catch (const StageError& e) {
    std::cerr << "numerical failure in " << e.what() << '\n';
    return kNumeric;
  } catch (const VortexError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  try {
    publish(result, a.out);
  } catch (const std::exception& e) {
    std::cerr << "cannot write outputs: " << e.what() << '\n';
    return kConfig;
  }
  for (const std::string& line : result.summary) std::cout << line << '\n';
  std::cout << result.files.size() << " files written to " << a.out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic orbits and choreographies of point vortices"};
  app.require_subcommand(1);

  RunArgs eq_args, branch_args, res_args, choreo_args;
  add_run_options(app.add_subcommand("equilibrium", "polygon equilibrium and its spectrum"), eq_args);
  add_run_options(app.add_subcommand("branch", "continue the scenario's families; branch tables and diagrams"),
                  branch_args);
  add_run_options(app.add_subcommand("resonance", "as branch, plus the located resonant orbits"), res_args);
  add_run_options(app.add_subcommand("choreo", "full run: choreography exports, figures and table"),
                  choreo_args);

  std::vector<std::string> report_inputs;
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "table from choreography documents");
  report->add_option("inputs", report_inputs, "choreography documents");
  report->add_option("--out", report_out, "also write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "equilibrium") return run(eq_args, Depth::Equilibrium);
  if (cmd == "branch") return run(branch_args, Depth::Branch);
  if (cmd == "resonance") return run(res_args, Depth::Resonance);
  if (cmd == "choreo") return run(choreo_args, Depth::Choreography);

  try {
    const std::string table = table_report(report_inputs);
    std::cout << table;
    if (!report_out.empty()) write_file_atomic(report_out, table);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
