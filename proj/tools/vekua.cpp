// Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
// 2 configuration or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "commands.hpp"

namespace {

using namespace vekua::cli;

int emit(const Report& report, const std::string& path, bool json) {
  if (json) std::cout << report.to_json().dump(2) << "\n";
  else std::cout << report.summary();
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) {
      std::cerr << "error: cannot write " << path << "\n";
      return 2;
    }
    out << report.to_json().dump(2) << "\n";
  }
  return exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual checks for Schrodinger equations via Vekua and Bers theory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config, report_path, curve, solution, out_dir;
  bool json = false;
  int steps = -1;

  auto* verify = app.add_subcommand("verify", "run the residual and identity suite");
  verify->add_option("--config", config, "config file or builtin:NAME")->required();
  verify->add_option("--report", report_path, "write the JSON report here");
  verify->add_flag("--json", json, "print the JSON report instead of the summary");

  auto* cauchy = app.add_subcommand("cauchy", "Cauchy integrals of a solution over a closed curve");
  cauchy->add_option("--config", config, "config file or builtin:NAME")->required();
  cauchy->add_option("--curve", curve, "curve name from the config")->required();
  cauchy->add_option("--solution", solution, "solution name from the config")->required();
  cauchy->add_option("--report", report_path, "write the JSON report here");
  cauchy->add_flag("--json", json, "print the JSON report instead of the summary");

  auto* sequence = app.add_subcommand("sequence", "run cycles of the solution sequence");
  sequence->add_option("--config", config, "config file or builtin:NAME")->required();
  sequence->add_option("--steps", steps, "number of cycles (default: pipeline.steps)")->check(CLI::NonNegativeNumber);
  sequence->add_option("--out", out_dir, "output directory for CSV files and report.json")->required();
  sequence->add_flag("--json", json, "print the JSON report instead of the summary");

  auto* examples = app.add_subcommand("examples", "built-in configurations");
  examples->require_subcommand(1);
  examples->add_subcommand("list", "list the built-in configurations");
  std::string show_name;
  auto* show = examples->add_subcommand("show", "print a built-in configuration");
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*examples) {
      if (examples->got_subcommand("list")) {
        for (const auto& [name, doc] : catalog()) std::cout << name << "\n";
        return 0;
      }
      auto it = catalog().find(show_name);
      if (it == catalog().end()) {
        std::cerr << "error: no built-in configuration named '" << show_name << "'\n";
        return 2;
      }
      std::cout << it->second.dump(2) << "\n";
      return 0;
    }

    const RunConfig cfg = load_config(config);
    if (*verify) return emit(cmd_verify(cfg), report_path, json);
    if (*cauchy) return emit(cmd_cauchy(cfg, curve, solution), report_path, json);
    if (*sequence) {
      const SequenceOutput out = cmd_sequence(cfg, steps < 0 ? cfg.steps : steps);
      write_sequence_output(out, out_dir);
      return emit(out.report, "", json);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const vekua::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
