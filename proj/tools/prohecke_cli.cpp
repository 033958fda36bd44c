#include <iostream>

#include "CLI11.hpp"
#include "prohecke/error.hpp"
#include "prohecke/suites.hpp"

// Exit codes: 0 all selected suites pass, 1 some suite fails, 2 bad configuration.
int main(int argc, char** argv) {
  using namespace prohecke;
  suites::RunConfig cfg;
  std::vector<std::string> groups;

  CLI::App app{"Verification runs for rank-one pro-p Iwahori-Hecke algebras"};
  app.add_option("--q", cfg.q, "Residue field size, an odd or even prime power")->capture_default_str();
  app.add_option("--ambient-degree", cfg.ambient_degree, "Work in F_(q^m)")->capture_default_str();
  app.add_option("--group", groups, "GL2, SL2, PGL2 or all (repeatable)");
  app.add_option("--lambda", cfg.lambdas, "Field element code for lambda (repeatable); default all of F_q^x");
  app.add_option("--max-length", cfg.max_length, "Word length bound for model checks")->capture_default_str();
  app.add_option("--trunc-degree", cfg.trunc_degree, "Truncation degree for resolutions and A-side Ext")
      ->capture_default_str();
  app.add_option("--window", cfg.window, "Index window for the DGA suite")->capture_default_str();
  app.add_option("--suite", cfg.suites, "blocks, models, modules, scheme, dga, endo (repeatable); default all");
  app.add_option("--format", cfg.format, "table or json")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--module-samples", cfg.module_samples, "Random R-modules in the modules suite")
      ->capture_default_str();
  app.add_option("--dga-samples", cfg.dga_samples, "Random pairs in the dga suite")->capture_default_str();
  app.add_flag("--timing", cfg.timing, "Include per-suite seconds in JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!groups.empty()) {
      cfg.groups.clear();
      for (const auto& g : groups) {
        if (g == "all") {
          cfg.groups = {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2};
          break;
        }
        try {
          cfg.groups.push_back(parse_group_kind(g));
        } catch (const Error&) {
          throw Error(ErrorKind::ConfigError, "unknown group '" + g + "'");
        }
      }
    }
    auto report = suites::run(cfg);
    std::cout << suites::emit(report, cfg.format);
    return report.pass() ? 0 : 1;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ConfigError) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
