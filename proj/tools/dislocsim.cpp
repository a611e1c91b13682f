#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "disloc/cli.hpp"

namespace {

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw disloc::ConfigError("cannot read config file \"" + path + "\"");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D-1D screw-dislocation phase-field simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a simulation scenario");
  std::string scenarioName = "custom";
  std::string configPath;
  std::string outDir = "out";
  run->add_option("--scenario", scenarioName, "constant|periodic|custom")->capture_default_str();
  run->add_option("--config", configPath, "configuration file (flat JSON)");
  run->add_option("--out", outDir, "output directory")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "solver convergence checks");
  std::string gridList;
  validate->add_option("--grids", gridList, "comma-separated sizes, e.g. 64x32,128x64")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      disloc::Scenario scenario;
      scenario.name = disloc::scenario_from_string(scenarioName);
      if (!configPath.empty()) scenario.config_text = readFile(configPath);
      disloc::RunOutput out = disloc::run_scenario(scenario, outDir);
      std::cout << "run complete; outputs in " << out.directory.string() << "\n";
      return 0;
    }
    if (*validate) {
      auto grids = disloc::parse_grid_list(gridList);
      disloc::ValidationReport rep = disloc::validate_grids(grids);
      std::cout << rep.text;
      return rep.passed ? 0 : 3;
    }
  } catch (const disloc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const disloc::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
