#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "disloc/core.hpp"
#include "disloc/dynamics.hpp"

namespace disloc {

enum class ScenarioName { Constant, Periodic, Custom };

ScenarioName scenario_from_string(const std::string& name);

/// A named experiment plus the user's configuration document. Scenario
/// presets fill only keys the user left unset; explicit user keys win and
/// every such conflict is reported in resolve().
struct Scenario {
  ScenarioName name = ScenarioName::Custom;
  std::string config_text;  // user configuration document (may be empty)

  struct Resolved {
    Config config;
    std::string resolved_text;              // parses back to config
    std::vector<std::string> preset_overrides;  // user keys that beat a preset
  };
  Resolved resolve() const;
};

struct RunOutput {
  std::filesystem::path directory;
  std::filesystem::path timeseries_csv;
  std::filesystem::path profiles_csv;
  std::filesystem::path config_resolved;
  std::filesystem::path run_log;
};

/// Executes a scenario end to end and writes timeseries.csv, profiles.csv,
/// config.resolved and run.log into out_dir. Files appear atomically at run
/// end; reruns with the same configuration are byte-identical.
/// Throws ConfigError for configuration problems and IntegrationError for
/// numerical failures (a partial run.log is left behind in the latter case).
RunOutput run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

struct GridSizeArg {
  int Nx = 0;
  int Ny = 0;
};

std::vector<GridSizeArg> parse_grid_list(const std::string& arg);

struct ValidationReport {
  std::vector<GridSizeArg> grids;
  std::vector<double> mms_errors;      // max-norm manufactured-solution errors
  std::vector<double> ratios;          // successive error ratios
  double dtn_mode_error_m1 = 0.0;      // at the finest grid
  double dtn_mode_error_m2 = 0.0;
  bool passed = false;                 // ratios >= 3.5 and mode errors <= 1%
  std::string text;                    // printable report
};

/// Manufactured-solution convergence and DtN eigenpair checks over a list of
/// at least two grid sizes.
ValidationReport validate_grids(const std::vector<GridSizeArg>& grids);

/// Shortest representation of v that parses back to the same double.
std::string format_double(double v);

}  // namespace disloc
