#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mzsim/diffraction.hpp"
#include "mzsim/engine.hpp"
#include "mzsim/network.hpp"

namespace mzsim {

enum class Scenario {
  fig2,
  fig4a,
  fig4b,
  fig4c,
  fig7,
  doubleslit_sweep,
  doubleslit_transient,
  custom
};

enum class ModelChoice { local, nonlocal, both };
enum class SourceMode { continuous, pulsed };

std::string_view to_string(Scenario s);
std::string_view to_string(ModelChoice m);
std::string_view to_string(SourceMode m);
/// Throws ConfigError listing the valid names.
Scenario parse_scenario(std::string_view name);
ModelChoice parse_model_choice(std::string_view name);

struct SourceConfig {
  SourceMode mode = SourceMode::continuous;
  double wavelength = 633e-9;
  double coherence_length = 50.0;
  double peak_amplitude = 1.0;
  double pass_time = -20e-9;  // packet 1 centre crosses AOM 2
  bool packet2 = false;
  double packet2_delay = 0.0;  // emission offset after packet 1, s
  double packet2_wavelength = 633e-9;

  bool operator==(const SourceConfig&) const = default;
};

struct DiffractionConfig {
  SlitGeometry geometry;
  std::vector<double> distances{0.005, 0.3, 3.0};
  std::size_t grid_points = 2001;
  double half_width = 0.0;  // 0: automatic per distance
  QuadratureOptions quadrature;
  RegimeThresholds thresholds;
  double transient_distance = 3.0;
  double switch_time = 0.0;
  OpenSlits open_before = OpenSlits::both;
  OpenSlits open_after = OpenSlits::first;

  bool operator==(const DiffractionConfig&) const = default;
};

struct AnalysisConfig {
  double onset_threshold = 0.01;
  int baseline_samples = 20;
  double visibility_cutoff = 0.01;  // below this, interference has disappeared
  int phase_steps = 16;

  bool operator==(const AnalysisConfig&) const = default;
};

/// Fully resolved run configuration.
struct ScenarioConfig {
  Scenario scenario = Scenario::fig7;
  ModelChoice model = ModelChoice::both;
  MziSpec network;
  SourceConfig source;
  SwitchingSchedule schedule;
  SimParams sim;  // packets are derived from `source`
  DiffractionConfig diffraction;
  AnalysisConfig analysis;
  std::string output_dir = "out";

  bool operator==(const ScenarioConfig&) const = default;
};

/// Preset reproducing one figure or experiment.
ScenarioConfig default_config(Scenario scenario);

/// Sectioned `key = value` text: `[run]`, `[network]`, `[source]`, `[schedule]`, `[sim]`,
/// `[diffraction]`, `[analysis]`, `[output]`. `#` starts a comment. Values are numbers, `true` /
/// `false`, double-quoted strings or `[ ... ]` lists. Unknown sections or keys are errors.
struct ConfigEntry {
  std::string key;  // "section.key"
  std::string value;
  int line = 0;
};
std::vector<ConfigEntry> parse_config_text(std::string_view text);

/// Resolves scenario defaults, then file entries, then overrides (later wins). `run.scenario`
/// may come from either list, overrides first. Throws ConfigError.
ScenarioConfig resolve_config(const std::vector<ConfigEntry>& file_entries,
                              const std::vector<ConfigEntry>& overrides);

/// Sets one dotted key from its text form. Throws ConfigError on unknown key or bad value.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Canonical text of every key; resolve_config(parse_config_text(dump_config(c)), {}) == c.
std::string dump_config(const ScenarioConfig& cfg);

/// Checks cross-field invariants (positive lengths, known AOMs in events, ...).
void validate_config(const ScenarioConfig& cfg);

}  // namespace mzsim
