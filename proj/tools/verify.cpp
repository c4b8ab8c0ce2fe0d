// Scenario runner: loads a config, runs the selected verification suites and
// writes a machine-readable report. Exit code 0 iff every suite passed.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gjet/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chart-local gauge/jet groupoid verification harness"};

  std::string config_path;
  std::vector<std::string> suites;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string out_path;
  std::string format = "json";

  app.add_option("--config", config_path, "scenario config (JSON)")->required();
  app.add_option("--suite", suites,
                 "suite name or 'all' (repeatable; overrides config)");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_path, "report output path");
  app.add_option("--format", format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    gjet::Scenario scn = gjet::Scenario::from_json_file(config_path);
    if (!suites.empty()) scn.suites = suites;
    if (seed_given) scn.seed = seed;
    if (const char* tol = std::getenv("GG_TOL_REL")) {
      try {
        scn.tol_rel = std::stod(tol);
      } catch (const std::exception&) {
        throw gjet::ConfigError("GG_TOL_REL is not a number");
      }
    }
    scn.validate();

    gjet::Report rep = gjet::run_scenario(scn);

    for (const auto& s : rep.suites)
      std::cout << (s.pass ? "[PASS] " : "[FAIL] ") << s.name
                << "  trials=" << s.trials << "  max=" << s.max_residual
                << "  tol=" << s.tolerance << "\n";
    std::cout << (rep.all_pass ? "all suites passed" : "some suites FAILED")
              << "  (wall " << rep.wall_ms << " ms)\n";

    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw gjet::IoError("cannot write report '" + out_path + "'");
      out << (format == "json" ? gjet::emit_json(rep) : gjet::emit_csv(rep));
    }
    return rep.all_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
