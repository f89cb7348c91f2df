#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mzsim/analysis.hpp"
#include "mzsim/config.hpp"
#include "mzsim/diffraction.hpp"
#include "mzsim/scenarios.hpp"

namespace mzsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

struct ModelOutcome {
  PropagationModel model = PropagationModel::local;
  SimulationResult result;
  std::vector<OnsetReport> onsets;           // detectors that departed their baseline
  std::optional<OnsetReport> earliest;       // smallest onset_time across detectors
  std::optional<VisibilityReport> visibility;
  std::optional<Fig4cResult> two_packet;     // fig4c only
};

struct RegimeRow {
  double z = 0.0;
  RegimeReport regime;
  std::optional<double> spacing;  // far_fringes only
  ScreenProfile profile;
};

struct TransientRow {
  PropagationModel model = PropagationModel::local;
  double predicted_change = 0.0;
  std::optional<double> observed_change;  // first sample showing the new pattern
};

struct ScenarioOutcome {
  ScenarioConfig config;
  std::vector<ModelOutcome> models;
  std::vector<DiscriminationReport> discrimination;  // one per detector, model pair runs only
  double expected_delay = 0.0;                       // switched AOM to det1
  std::vector<RegimeRow> regimes;
  std::vector<TransientRow> transients;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
  std::string summary;

  const ModelOutcome* model(PropagationModel m) const;
};

/// Executes the configured scenario. Does not touch the filesystem.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

/// Writes trace/profile CSVs and summary.txt into cfg.output_dir; fills outcome.files.
void write_outputs(ScenarioOutcome& outcome);

/// Full command line: `mzsim run --scenario <name> [--model ...] [--config <path>] [--out <dir>]
/// [--section.key value]... [--dump-config]`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mzsim
