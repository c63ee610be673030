#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gilbert/cli/config.hpp"

namespace gilbert::cli {

enum ExitCode : int { Success = 0, Usage = 1, Degenerate = 2, CheckFailed = 3 };

struct KeySpec {
  std::string key;
  std::string default_value;  // empty: optional, no default
  std::string help;
};

struct ExperimentSpec {
  std::string name;
  std::string help;
  std::vector<KeySpec> keys;  // experiment-specific keys
};

/// Keys accepted by every experiment.
const std::vector<KeySpec>& common_keys();
const std::vector<ExperimentSpec>& experiments();
const ExperimentSpec& experiment(const std::string& name);

/// Defaults of the experiment and the common keys, with `experiment` set.
Config defaults_for(const std::string& name);

struct RunResult {
  int exit_code = Success;
  std::vector<std::filesystem::path> outputs;  // data files, then the manifest
  std::filesystem::path manifest;
  std::string message;
};

/// Runs the experiment named by config key `experiment`. Unknown keys are a
/// usage error. Writes CSV/JSON outputs named `<experiment>_seed<seed>_*` into
/// `output_dir`, then a manifest that records the full configuration, the
/// version string and the wall time. Never throws; failures set exit_code and
/// message.
RunResult run(const Config& config, const std::string& version, std::ostream& log);

}  // namespace gilbert::cli
