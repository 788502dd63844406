#pragma once

// Command implementations behind the buyerdyn CLI. Each returns its outputs
// as strings so callers decide where bytes go; the run_* helpers write files.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "buyerdyn/experiments.hpp"
#include "buyerdyn/feedback.hpp"
#include "buyerdyn/io.hpp"

namespace buyerdyn {

// CLI exit statuses.
enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitUsage = 2, kExitDomain = 3 };

struct SimulationOutput {
  OrbitTrace trace;
  std::optional<ConvergenceVerdict> verdict;  // empty when the trace is shorter than the window
  std::string csv;
  std::string summary;  // JSON
};

SimulationOutput simulate(const RunConfig& config);

// Writes <prefix>.csv and <prefix>.summary.
SimulationOutput run_simulate(const RunConfig& config, const std::filesystem::path& prefix);

// JSON rendering of verify_conditions.
std::string condition_report_json(const ConditionReport& report, const ConditionOptions& options);

struct FigureCheck {
  std::string name;
  bool passed;
  std::string detail;
  bool informational = false;  // reported but not gating
};

struct FigureResult {
  std::string id;
  bool normative = true;
  std::vector<FigureCheck> checks;
  std::vector<std::pair<std::string, std::string>> series;  // file name -> CSV
  std::string summary;                                       // JSON

  bool passed() const;
};

// Canned configurations for the figure reproductions.
RunConfig figure2_config();
RunConfig figure3_config();
RunConfig figure4b_config();  // non-normative N=3 base point from data/fig4b.cfg

const std::vector<std::string>& figure_ids();

// Throws std::invalid_argument for unknown ids.
FigureResult figure(const std::string& id);

// Writes every series and <id>.summary into out_dir (created if needed).
FigureResult run_figure(const std::string& id, const std::filesystem::path& out_dir);

std::string basin_scan_json(const RunConfig& config, const BasinScanResult& result);

BasinScanResult basin_scan(const RunConfig& config, Coordinate varied, double lo, double hi, double tol);

}  // namespace buyerdyn
