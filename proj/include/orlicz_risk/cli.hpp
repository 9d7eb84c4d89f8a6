#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz_risk/check.hpp"
#include "orlicz_risk/parallel.hpp"
#include "orlicz_risk/scenario.hpp"

namespace orlicz_risk::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kRuntimeError = 3 };

struct RunOptions {
  double tol_gap = 1e-6;
  double tol_norm = 1e-8;
  std::uint64_t seed = 0;
  Parallelism mode = Parallelism::sequential;
};

struct CsvRow {
  std::string section;
  std::string position;
  std::string algebra;
  std::size_t atom = 0;
  std::string labels;
  std::string quantity;
  double value = 0.0;
};

struct CommandResult {
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<CsvRow> rows;
  std::deque<CheckResult> checks;  // stable addresses while checks are appended

  bool pass() const;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"norm", "risk", "dual", "verify", "dynamic"};
  return names;
}

/// Runs one command on a parsed scenario. Throws ScenarioError when the
/// scenario lacks what the command needs (e.g. `dynamic` without a filtration).
CommandResult run_command(const std::string& command, const Scenario& scenario,
                          const RunOptions& opts);

/// Rounds to 12 significant digits; the value written to reports.
double round12(double v);

/// Report as pretty-printed JSON with a trailing newline.
std::string render_report(const std::string& command, const std::string& scenario_name,
                          const Scenario& scenario, const RunOptions& opts,
                          const CommandResult& result);

std::string render_csv(const std::vector<CsvRow>& rows);

/// Output paths `<dir>/<stem>.report.json` and `<dir>/<stem>.atoms.csv`.
std::filesystem::path report_path(const std::filesystem::path& scenario,
                                  const std::filesystem::path& out_dir);
std::filesystem::path csv_path(const std::filesystem::path& scenario,
                               const std::filesystem::path& out_dir);

/// Entry point: `orlicz-risk <command> <scenario.json> [flags]`.
int run(int argc, char** argv);

} // namespace orlicz_risk::cli
