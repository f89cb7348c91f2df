#include "mzsim/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>

#include "mzsim/errors.hpp"

namespace mzsim {

namespace {

constexpr std::array kScenarioNames{"fig2",  "fig4a", "fig4b",           "fig4c",
                                    "fig7",  "doubleslit_sweep", "doubleslit_transient",
                                    "custom"};

std::string scenario_list() {
  std::string s;
  for (const char* n : kScenarioNames) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                    " (expected " + std::string(want) + ")");
}

double parse_number(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) bad_value(key, text, "a number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) bad_value(key, text, "a finite number");
  return v;
}

long parse_integer(std::string_view key, std::string_view text) {
  const std::string_view s = trim(text);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) bad_value(key, text, "an integer");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "true") return true;
  if (s == "false") return false;
  bad_value(key, text, "true or false");
}

// Quoted strings unescape \" and \; bare words are accepted for command-line convenience.
std::string parse_string(std::string_view key, std::string_view text) {
  const std::string_view s = trim(text);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) ++i;
      else if (s[i] == '"') bad_value(key, text, "a string with escaped quotes");
      out += s[i];
    }
    return out;
  }
  if (s.empty() || s.find_first_of("\"[],") != std::string_view::npos) {
    bad_value(key, text, "a string");
  }
  return std::string(s);
}

std::vector<std::string> split_list(std::string_view key, std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> items;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quoted && c == '\\' && i + 1 < s.size()) {
      current += c;
      current += s[++i];
      continue;
    }
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.emplace_back(trim(current));
      current.clear();
      continue;
    }
    current += c;
  }
  if (quoted) bad_value(key, text, "a list with balanced quotes");
  if (!trim(current).empty() || !items.empty()) items.emplace_back(trim(current));
  for (const auto& item : items) {
    if (item.empty()) bad_value(key, text, "a list without empty items");
  }
  return items;
}

std::string format_number(double v) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

OpenSlits parse_open(std::string_view key, std::string_view text) {
  const std::string s = parse_string(key, text);
  if (s == "first") return OpenSlits::first;
  if (s == "second") return OpenSlits::second;
  if (s == "both") return OpenSlits::both;
  bad_value(key, text, "first, second or both");
}

SwitchEvent parse_event(std::string_view key, const std::string& item) {
  const std::string s = parse_string(key, item);
  char component[64];
  char state[8];
  char time[64];
  if (std::sscanf(s.c_str(), "%63s %7s %63s", component, state, time) != 3) {
    bad_value(key, item, "\"<aom> on|off <time_s>\"");
  }
  const std::string st(state);
  if (st != "on" && st != "off") bad_value(key, item, "\"<aom> on|off <time_s>\"");
  return {component, st == "on", parse_number(key, time)};
}

std::pair<std::string, double> parse_level(std::string_view key, const std::string& item) {
  const std::string s = parse_string(key, item);
  char component[64];
  char level[64];
  if (std::sscanf(s.c_str(), "%63s %63s", component, level) != 2) {
    bad_value(key, item, "\"<aom> <transmission>\"");
  }
  return {component, parse_number(key, level)};
}

struct Setting {
  std::string_view key;
  std::function<void(ScenarioConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename Access>
Setting number(std::string_view key, Access access) {
  return {key,
          [access](ScenarioConfig& c, std::string_view k, std::string_view v) {
            access(c) = parse_number(k, v);
          },
          [access](const ScenarioConfig& c) { return format_number(access(c)); }};
}

template <typename Access>
Setting integer(std::string_view key, Access access, long min_value) {
  return {key,
          [access, min_value](ScenarioConfig& c, std::string_view k, std::string_view v) {
            const long n = parse_integer(k, v);
            if (n < min_value) bad_value(k, v, "an integer >= " + std::to_string(min_value));
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(n);
          },
          [access](const ScenarioConfig& c) { return std::to_string(access(c)); }};
}

template <typename Access>
Setting boolean(std::string_view key, Access access) {
  return {key,
          [access](ScenarioConfig& c, std::string_view k, std::string_view v) {
            access(c) = parse_bool(k, v);
          },
          [access](const ScenarioConfig& c) { return std::string(access(c) ? "true" : "false"); }};
}

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = [] {
    std::vector<Setting> t;
    t.push_back({"run.scenario",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.scenario = parse_scenario(parse_string(k, v));
                 },
                 [](const ScenarioConfig& c) { return quote(to_string(c.scenario)); }});
    t.push_back({"run.model",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.model = parse_model_choice(parse_string(k, v));
                 },
                 [](const ScenarioConfig& c) { return quote(to_string(c.model)); }});

    t.push_back(number("network.arm_length", [](auto& c) -> auto& { return c.network.arm_length; }));
    t.push_back(number("network.aom1_position", [](auto& c) -> auto& { return c.network.aom1_position; }));
    t.push_back(number("network.aom2_position", [](auto& c) -> auto& { return c.network.aom2_position; }));
    t.push_back(boolean("network.balanced", [](auto& c) -> auto& { return c.network.balanced; }));
    t.push_back(number("network.imbalance", [](auto& c) -> auto& { return c.network.imbalance; }));
    t.push_back(number("network.arm_phase", [](auto& c) -> auto& { return c.network.arm_phase; }));
    t.push_back(number("network.drift_amplitude", [](auto& c) -> auto& { return c.network.drift_amplitude; }));
    t.push_back(number("network.drift_period", [](auto& c) -> auto& { return c.network.drift_period; }));
    t.push_back(boolean("network.fiber", [](auto& c) -> auto& { return c.network.fiber; }));

    t.push_back({"source.mode",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   const std::string s = parse_string(k, v);
                   if (s == "continuous") c.source.mode = SourceMode::continuous;
                   else if (s == "pulsed") c.source.mode = SourceMode::pulsed;
                   else bad_value(k, v, "continuous or pulsed");
                 },
                 [](const ScenarioConfig& c) { return quote(to_string(c.source.mode)); }});
    t.push_back(number("source.wavelength", [](auto& c) -> auto& { return c.source.wavelength; }));
    t.push_back(number("source.coherence_length", [](auto& c) -> auto& { return c.source.coherence_length; }));
    t.push_back(number("source.peak_amplitude", [](auto& c) -> auto& { return c.source.peak_amplitude; }));
    t.push_back(number("source.pass_time", [](auto& c) -> auto& { return c.source.pass_time; }));
    t.push_back(boolean("source.packet2", [](auto& c) -> auto& { return c.source.packet2; }));
    t.push_back(number("source.packet2_delay", [](auto& c) -> auto& { return c.source.packet2_delay; }));
    t.push_back(number("source.packet2_wavelength", [](auto& c) -> auto& { return c.source.packet2_wavelength; }));

    t.push_back(number("schedule.ramp_duration", [](auto& c) -> auto& { return c.schedule.ramp_duration; }));
    t.push_back({"schedule.events",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.schedule.events.clear();
                   for (const auto& item : split_list(k, v)) {
                     c.schedule.events.push_back(parse_event(k, item));
                   }
                 },
                 [](const ScenarioConfig& c) {
                   std::string s = "[";
                   for (const auto& e : c.schedule.events) {
                     if (s.size() > 1) s += ", ";
                     s += quote(e.component + (e.on ? " on " : " off ") + format_number(e.time));
                   }
                   return s + "]";
                 }});
    t.push_back({"schedule.initial_levels",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.schedule.initial_levels.clear();
                   for (const auto& item : split_list(k, v)) {
                     auto [id, level] = parse_level(k, item);
                     c.schedule.initial_levels[id] = level;
                   }
                 },
                 [](const ScenarioConfig& c) {
                   std::string s = "[";
                   for (const auto& [id, level] : c.schedule.initial_levels) {
                     if (s.size() > 1) s += ", ";
                     s += quote(id + " " + format_number(level));
                   }
                   return s + "]";
                 }});

    t.push_back(number("sim.t_start", [](auto& c) -> auto& { return c.sim.t_start; }));
    t.push_back(number("sim.t_end", [](auto& c) -> auto& { return c.sim.t_end; }));
    t.push_back(number("sim.dt", [](auto& c) -> auto& { return c.sim.dt; }));

    t.push_back(number("diffraction.wavelength", [](auto& c) -> auto& { return c.diffraction.geometry.wavelength; }));
    t.push_back(number("diffraction.separation", [](auto& c) -> auto& { return c.diffraction.geometry.separation; }));
    t.push_back(number("diffraction.width", [](auto& c) -> auto& { return c.diffraction.geometry.width; }));
    t.push_back({"diffraction.distances",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.diffraction.distances.clear();
                   for (const auto& item : split_list(k, v)) {
                     c.diffraction.distances.push_back(parse_number(k, item));
                   }
                 },
                 [](const ScenarioConfig& c) {
                   std::string s = "[";
                   for (double z : c.diffraction.distances) {
                     if (s.size() > 1) s += ", ";
                     s += format_number(z);
                   }
                   return s + "]";
                 }});
    t.push_back(integer("diffraction.grid_points", [](auto& c) -> auto& { return c.diffraction.grid_points; }, 3));
    t.push_back(number("diffraction.half_width", [](auto& c) -> auto& { return c.diffraction.half_width; }));
    t.push_back(integer("diffraction.min_nodes", [](auto& c) -> auto& { return c.diffraction.quadrature.min_nodes; }, 3));
    t.push_back(integer("diffraction.max_nodes", [](auto& c) -> auto& { return c.diffraction.quadrature.max_nodes; }, 5));
    t.push_back(number("diffraction.tolerance", [](auto& c) -> auto& { return c.diffraction.quadrature.tolerance; }));
    t.push_back(number("diffraction.dominance", [](auto& c) -> auto& { return c.diffraction.thresholds.dominance; }));
    t.push_back(number("diffraction.cluster_gap", [](auto& c) -> auto& { return c.diffraction.thresholds.cluster_gap; }));
    t.push_back(number("diffraction.near_tolerance", [](auto& c) -> auto& { return c.diffraction.thresholds.near_tolerance; }));
    t.push_back(number("diffraction.far_tolerance", [](auto& c) -> auto& { return c.diffraction.thresholds.far_tolerance; }));
    t.push_back(integer("diffraction.min_fringes", [](auto& c) -> auto& { return c.diffraction.thresholds.min_fringes; }, 2));
    t.push_back(number("diffraction.transient_distance", [](auto& c) -> auto& { return c.diffraction.transient_distance; }));
    t.push_back(number("diffraction.switch_time", [](auto& c) -> auto& { return c.diffraction.switch_time; }));
    t.push_back({"diffraction.open_before",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.diffraction.open_before = parse_open(k, v);
                 },
                 [](const ScenarioConfig& c) { return quote(to_string(c.diffraction.open_before)); }});
    t.push_back({"diffraction.open_after",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.diffraction.open_after = parse_open(k, v);
                 },
                 [](const ScenarioConfig& c) { return quote(to_string(c.diffraction.open_after)); }});

    t.push_back(number("analysis.onset_threshold", [](auto& c) -> auto& { return c.analysis.onset_threshold; }));
    t.push_back(integer("analysis.baseline_samples", [](auto& c) -> auto& { return c.analysis.baseline_samples; }, 1));
    t.push_back(number("analysis.visibility_cutoff", [](auto& c) -> auto& { return c.analysis.visibility_cutoff; }));
    t.push_back(integer("analysis.phase_steps", [](auto& c) -> auto& { return c.analysis.phase_steps; }, 2));

    t.push_back({"output.dir",
                 [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                   c.output_dir = parse_string(k, v);
                 },
                 [](const ScenarioConfig& c) { return quote(c.output_dir); }});
    return t;
  }();
  return table;
}

const Setting& find_setting(std::string_view key) {
  for (const auto& s : settings()) {
    if (s.key == key) return s;
  }
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

}  // namespace

std::string_view to_string(Scenario s) { return kScenarioNames[static_cast<std::size_t>(s)]; }

std::string_view to_string(ModelChoice m) {
  switch (m) {
    case ModelChoice::local: return "local";
    case ModelChoice::nonlocal: return "nonlocal";
    case ModelChoice::both: return "both";
  }
  return "both";
}

std::string_view to_string(SourceMode m) {
  return m == SourceMode::pulsed ? "pulsed" : "continuous";
}

Scenario parse_scenario(std::string_view name) {
  for (std::size_t i = 0; i < kScenarioNames.size(); ++i) {
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'; valid scenarios: " +
                    scenario_list());
}

ModelChoice parse_model_choice(std::string_view name) {
  if (name == "local") return ModelChoice::local;
  if (name == "nonlocal") return ModelChoice::nonlocal;
  if (name == "both") return ModelChoice::both;
  throw ConfigError("unknown model '" + std::string(name) + "'; valid models: local, nonlocal, both");
}

ScenarioConfig default_config(Scenario scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  const SwitchEvent aom2_off{std::string(mzi_ids::aom2), false, 0.0};
  switch (scenario) {
    case Scenario::fig7:
    case Scenario::custom:
      c.schedule.events = {aom2_off};
      c.sim = {-20e-9, 100e-9, 0.5e-9, {}};
      break;
    case Scenario::fig2:
      // Short packets from a non-laser source, past the AOMs well before switch-off.
      c.source.mode = SourceMode::pulsed;
      c.source.coherence_length = 0.3;
      c.source.pass_time = -20e-9;
      c.schedule.events = {aom2_off};
      c.sim = {-10e-9, 80e-9, 0.5e-9, {}};
      break;
    case Scenario::fig4a:
      c.sim = {0.0, 100e-9, 0.5e-9, {}};
      break;
    case Scenario::fig4b:
      c.source.mode = SourceMode::pulsed;
      c.source.coherence_length = 1.5;
      c.source.pass_time = -30e-9;
      c.schedule.events = {aom2_off};
      c.sim = {-20e-9, 100e-9, 0.5e-9, {}};
      break;
    case Scenario::fig4c:
      c.source.mode = SourceMode::pulsed;
      c.source.coherence_length = 50.0;
      c.source.pass_time = -100e-9;
      c.source.packet2 = true;
      c.source.packet2_delay = 50.0 / kSpeedOfLight;
      c.schedule.events = {aom2_off};
      c.sim = {-600e-9, 700e-9, 0.5e-9, {}};
      break;
    case Scenario::doubleslit_sweep:
      break;
    case Scenario::doubleslit_transient:
      c.diffraction.grid_points = 401;
      c.sim = {-5e-9, 20e-9, 0.5e-9, {}};
      break;
  }
  return c;
}

std::vector<ConfigEntry> parse_config_text(std::string_view text) {
  std::vector<ConfigEntry> entries;
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\\' && quoted) {
        ++i;
      } else if (line[i] == '"') {
        quoted = !quoted;
      } else if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    auto where = [&] { return " (line " + std::to_string(line_no) + ")"; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header" + where());
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string, std::less<>> known{
          "run", "network", "source", "schedule", "sim", "diffraction", "analysis", "output"};
      if (!known.contains(section)) {
        throw ConfigError("unknown section [" + section + "]" + where());
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value" + where());
    if (section.empty()) throw ConfigError("key outside of any section" + where());
    std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    find_setting(key);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'" + where());
    entries.push_back({std::move(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return entries;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  find_setting(key).set(cfg, key, value);
}

ScenarioConfig resolve_config(const std::vector<ConfigEntry>& file_entries,
                              const std::vector<ConfigEntry>& overrides) {
  std::optional<Scenario> scenario;
  auto scan = [&](const std::vector<ConfigEntry>& entries) {
    for (const auto& e : entries) {
      if (e.key == "run.scenario") scenario = parse_scenario(parse_string(e.key, e.value));
    }
  };
  scan(file_entries);
  scan(overrides);

  ScenarioConfig cfg = default_config(scenario.value_or(Scenario::fig7));
  for (const auto& e : file_entries) {
    try {
      apply_setting(cfg, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(std::string(err.what()) + " (line " + std::to_string(e.line) + ")");
    }
  }
  for (const auto& e : overrides) apply_setting(cfg, e.key, e.value);
  return cfg;
}

std::string dump_config(const ScenarioConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& s : settings()) {
    const auto dot = s.key.find('.');
    const std::string sec(s.key.substr(0, dot));
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += std::string(s.key.substr(dot + 1)) + " = " + s.get(cfg) + "\n";
  }
  return out;
}

void validate_config(const ScenarioConfig& cfg) {
  try {
    const auto net = build_mzi(cfg.network);
    compile_schedule(net, cfg.schedule);
    cfg.sim.sample_count();
    WavePacket p{0.0, cfg.source.wavelength, cfg.source.coherence_length,
                 cfg.source.peak_amplitude};
    p.validate();
    if (cfg.source.packet2) {
      p.wavelength = cfg.source.packet2_wavelength;
      p.validate();
    }
    cfg.diffraction.geometry.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (double z : cfg.diffraction.distances) {
    if (!(z > 0.0)) throw ConfigError("diffraction distances must be positive");
  }
  if (cfg.diffraction.distances.empty()) throw ConfigError("diffraction.distances is empty");
  if (!(cfg.diffraction.transient_distance > 0.0)) {
    throw ConfigError("diffraction.transient_distance must be positive");
  }
  if (cfg.diffraction.half_width < 0.0) throw ConfigError("diffraction.half_width must be >= 0");
  if (!(cfg.diffraction.quadrature.tolerance > 0.0)) {
    throw ConfigError("diffraction.tolerance must be positive");
  }
  if (!(cfg.analysis.onset_threshold > 0.0 && cfg.analysis.onset_threshold < 1.0)) {
    throw ConfigError("analysis.onset_threshold must lie in (0, 1)");
  }
  if (!(cfg.analysis.visibility_cutoff >= 0.0 && cfg.analysis.visibility_cutoff <= 1.0)) {
    throw ConfigError("analysis.visibility_cutoff must lie in [0, 1]");
  }
  if (cfg.output_dir.empty()) throw ConfigError("output.dir is empty");
}

}  // namespace mzsim
