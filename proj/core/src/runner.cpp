#include "mzsim/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mzsim/csv.hpp"
#include "mzsim/errors.hpp"

namespace mzsim {

const ModelOutcome* ScenarioOutcome::model(PropagationModel m) const {
  for (const auto& o : models) {
    if (o.model == m) return &o;
  }
  return nullptr;
}

namespace {

std::vector<PropagationModel> models_of(ModelChoice choice) {
  switch (choice) {
    case ModelChoice::local: return {PropagationModel::local};
    case ModelChoice::nonlocal: return {PropagationModel::nonlocal};
    case ModelChoice::both: return {PropagationModel::local, PropagationModel::nonlocal};
  }
  return {};
}

OnsetOptions onset_options(const ScenarioConfig& cfg) {
  return {cfg.analysis.onset_threshold, cfg.analysis.baseline_samples * cfg.sim.dt};
}

void analyse_onsets(ModelOutcome& m, const OnsetOptions& opts) {
  for (const auto& trace : m.result.traces) {
    if (auto onset = detect_onset(trace, opts)) {
      m.onsets.push_back(*onset);
      if (!m.earliest || onset->onset_time < m.earliest->onset_time) m.earliest = *onset;
    }
  }
}

std::vector<WavePacket> packets_for(const ScenarioConfig& cfg, const OpticalNetwork& net) {
  if (cfg.source.mode != SourceMode::pulsed) return {};
  WavePacket p1{0.0, cfg.source.wavelength, cfg.source.coherence_length,
                cfg.source.peak_amplitude};
  p1.emit_time = cfg.source.pass_time - delay_from_source(net, mzi_ids::aom2);
  std::vector<WavePacket> packets{p1};
  if (cfg.source.packet2) {
    WavePacket p2 = p1;
    p2.emit_time = p1.emit_time + cfg.source.packet2_delay;
    p2.wavelength = cfg.source.packet2_wavelength;
    packets.push_back(p2);
  }
  return packets;
}

double switched_aom_delay(const ScenarioConfig& cfg, const OpticalNetwork& net) {
  if (cfg.schedule.events.empty()) return 0.0;
  return delay_to_detector(net, cfg.schedule.events.front().component, mzi_ids::det1);
}

void add_discrimination(ScenarioOutcome& o, const OnsetOptions& opts) {
  const ModelOutcome* local = o.model(PropagationModel::local);
  const ModelOutcome* nonlocal = o.model(PropagationModel::nonlocal);
  if (local == nullptr || nonlocal == nullptr) return;
  for (std::size_t d = 0; d < local->result.traces.size(); ++d) {
    o.discrimination.push_back(discriminate_models(
        local->result.traces[d], nonlocal->result.traces[d], o.expected_delay, opts));
  }
}

void run_traces(ScenarioOutcome& o, bool with_visibility) {
  const auto& cfg = o.config;
  const auto net = build_mzi(cfg.network);
  SimParams params = cfg.sim;
  params.packets = packets_for(cfg, net);
  o.expected_delay = switched_aom_delay(cfg, net);
  const auto opts = onset_options(cfg);
  for (auto model : models_of(cfg.model)) {
    ModelOutcome m;
    m.model = model;
    m.result = simulate(net, cfg.schedule, model, params);
    analyse_onsets(m, opts);
    if (with_visibility) {
      m.visibility = phase_scan_visibility(cfg.network, cfg.schedule, model, params,
                                           mzi_ids::det1, cfg.analysis.phase_steps,
                                           params.t_start, params.t_end);
    }
    o.warnings.insert(o.warnings.end(), m.result.warnings.begin(), m.result.warnings.end());
    o.models.push_back(std::move(m));
  }
  add_discrimination(o, opts);
}

void run_single_packet(ScenarioOutcome& o) {
  const auto& cfg = o.config;
  Fig2Setup setup;
  setup.mzi = cfg.network;
  setup.packet = {0.0, cfg.source.wavelength, cfg.source.coherence_length,
                  cfg.source.peak_amplitude};
  setup.pass_time = cfg.source.pass_time;
  setup.schedule = cfg.schedule;
  setup.sim = cfg.sim;
  setup.phase_steps = cfg.analysis.phase_steps;
  auto result = run_fig2_scenario(setup);
  o.warnings = result.warnings;
  o.expected_delay = switched_aom_delay(cfg, build_mzi(cfg.network));

  const auto opts = onset_options(cfg);
  for (auto model : models_of(cfg.model)) {
    ModelOutcome m;
    m.model = model;
    const bool local = model == PropagationModel::local;
    m.result = local ? result.local : result.nonlocal;
    m.visibility = local ? result.visibility_local : result.visibility_nonlocal;
    analyse_onsets(m, opts);
    o.models.push_back(std::move(m));
  }
}

void run_two_packets(ScenarioOutcome& o) {
  const auto& cfg = o.config;
  const auto net = build_mzi(cfg.network);
  auto packets = packets_for(cfg, net);
  if (packets.empty()) throw SimulationError("fig4c needs a pulsed source");
  Fig4cSetup setup;
  setup.mzi = cfg.network;
  setup.packet1 = packets[0];
  if (packets.size() > 1) setup.packet2 = packets[1];
  setup.schedule = cfg.schedule;
  setup.sim = cfg.sim;
  setup.phase_steps = cfg.analysis.phase_steps;
  o.expected_delay = switched_aom_delay(cfg, net);

  const auto opts = onset_options(cfg);
  for (auto model : models_of(cfg.model)) {
    ModelOutcome m;
    m.model = model;
    auto r = run_fig4c_scenario(setup, model);
    m.result = r.traces;
    m.visibility = r.packet_visibility.front();
    for (const auto& w : r.warnings) {
      if (std::find(o.warnings.begin(), o.warnings.end(), w) == o.warnings.end()) {
        o.warnings.push_back(w);
      }
    }
    m.two_packet = std::move(r);
    analyse_onsets(m, opts);
    o.models.push_back(std::move(m));
  }
}

ScreenGrid grid_for(const DiffractionConfig& d, double z) {
  if (d.half_width > 0.0) return {d.half_width, d.grid_points};
  return default_grid(d.geometry, z, d.grid_points);
}

void run_sweep(ScenarioOutcome& o) {
  const auto& d = o.config.diffraction;
  SlitGeometry geom = d.geometry;
  geom.open = OpenSlits::both;
  for (double z : d.distances) {
    RegimeRow row;
    row.z = z;
    row.profile = slit_pattern(geom, z, grid_for(d, z), d.quadrature);
    row.regime = classify_regime(row.profile, geom, d.thresholds);
    if (row.regime.regime == Regime::far_fringes) {
      row.spacing = fringe_spacing(row.profile, d.thresholds.dominance);
    }
    o.regimes.push_back(std::move(row));
  }
}

void run_slit_transient(ScenarioOutcome& o) {
  const auto& cfg = o.config;
  const auto& d = cfg.diffraction;
  const double z = d.transient_distance;
  const auto grid = grid_for(d, z);
  SlitGeometry geom = d.geometry;
  geom.open = d.open_before;
  const auto before = slit_pattern(geom, z, grid, d.quadrature);
  geom.open = d.open_after;
  const auto after = slit_pattern(geom, z, grid, d.quadrature);

  const std::size_t n = cfg.sim.sample_count();
  for (auto model : models_of(cfg.model)) {
    TransientScreen screen(before, after, z, d.switch_time, model);
    TransientRow row{model, screen.change_time(), std::nullopt};
    for (std::size_t i = 0; i < n; ++i) {
      const double t = cfg.sim.time_at(i);
      if (screen.at(t).intensity != before.intensity) {
        row.observed_change = t;
        break;
      }
    }
    o.transients.push_back(row);
  }
  o.regimes.push_back({z, {}, std::nullopt, before});
  o.regimes.push_back({z, {}, std::nullopt, after});
}

std::string ns(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f ns", seconds * 1e9);
  return buf;
}

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string summarize(const ScenarioOutcome& o) {
  std::ostringstream s;
  const auto& cfg = o.config;
  s << "scenario: " << to_string(cfg.scenario) << "\n";
  for (const auto& w : o.warnings) s << "warning: " << w << "\n";

  for (const auto& m : o.models) {
    const std::string tag = "[" + std::string(to_string(m.model)) + "]";
    for (const auto& trace : m.result.traces) {
      const auto it = std::find_if(m.onsets.begin(), m.onsets.end(), [&](const OnsetReport& r) {
        return r.detector_id == trace.detector_id;
      });
      if (it == m.onsets.end()) {
        s << "onset" << tag << " " << trace.detector_id << ": none (steady)\n";
      } else {
        s << "onset" << tag << " " << trace.detector_id << ": " << ns(it->onset_time)
          << ", settled " << ns(it->settle_time) << "\n";
      }
    }
    if (m.visibility) {
      const bool appears = m.visibility->visibility >= cfg.analysis.visibility_cutoff;
      s << "visibility" << tag << ": V = " << fixed(m.visibility->visibility) << " ("
        << (appears ? "Interference appears" : "Interference disappears") << ")\n";
    }
    if (m.two_packet) {
      const auto& tp = *m.two_packet;
      if (tp.interference_weight) {
        s << "packet overlap" << tag << ": relative delay " << ns(*tp.relative_delay)
          << ", interference weight " << fixed(*tp.interference_weight) << "\n";
      }
      for (std::size_t k = 0; k < tp.packet_visibility.size(); ++k) {
        s << "packet " << k + 1 << " visibility" << tag << ": "
          << fixed(tp.packet_visibility[k].visibility) << "\n";
      }
    }
  }
  for (const auto& d : o.discrimination) {
    s << "discrimination " << d.detector_id << ": ";
    if (d.verdict == Verdict::inconclusive) {
      s << "onset missing, " << to_string(d.verdict) << "\n";
    } else {
      s << "local - nonlocal onset = " << ns(d.difference) << ", expected "
        << ns(d.expected_delay) << " +/- " << ns(d.tolerance) << ", " << to_string(d.verdict)
        << "\n";
    }
  }
  if (cfg.scenario == Scenario::doubleslit_sweep) {
    for (const auto& r : o.regimes) {
      s << "z = " << r.z << " m: " << to_string(r.regime.regime) << " ("
        << r.regime.dominant_positions.size() << " dominant maxima";
      if (r.spacing) {
        s << ", spacing " << fixed(*r.spacing * 1e3, 4) << " mm vs lambda z / d "
          << fixed(r.regime.expected_spacing * 1e3, 4) << " mm";
      }
      s << ", " << r.profile.nodes_per_slit << " nodes per slit)\n";
    }
  }
  for (const auto& t : o.transients) {
    s << "pattern change[" << to_string(t.model) << "]: predicted " << ns(t.predicted_change)
      << ", first changed sample "
      << (t.observed_change ? ns(*t.observed_change) : std::string("none")) << "\n";
  }
  return s.str();
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  ScenarioOutcome o;
  o.config = cfg;
  switch (cfg.scenario) {
    case Scenario::fig7:
    case Scenario::custom: run_traces(o, false); break;
    case Scenario::fig4a: run_traces(o, true); break;
    case Scenario::fig2:
    case Scenario::fig4b: run_single_packet(o); break;
    case Scenario::fig4c: run_two_packets(o); break;
    case Scenario::doubleslit_sweep: run_sweep(o); break;
    case Scenario::doubleslit_transient: run_slit_transient(o); break;
  }
  o.summary = summarize(o);
  return o;
}

void write_outputs(ScenarioOutcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir(o.config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  const std::string scenario(to_string(o.config.scenario));
  for (const auto& m : o.models) {
    const auto path = dir / (scenario + "_" + std::string(to_string(m.model)) + ".csv");
    emit_csv(trace_series(m.result.traces), path);
    o.files.push_back(path);
  }
  if (o.config.scenario == Scenario::doubleslit_sweep) {
    for (const auto& r : o.regimes) {
      char name[64];
      std::snprintf(name, sizeof name, "profile_z%g.csv", r.z);
      emit_csv(profile_series(r.profile), dir / name);
      o.files.push_back(dir / name);
    }
  } else if (o.config.scenario == Scenario::doubleslit_transient && o.regimes.size() == 2) {
    emit_csv(profile_series(o.regimes[0].profile), dir / "transient_before.csv");
    emit_csv(profile_series(o.regimes[1].profile), dir / "transient_after.csv");
    o.files.push_back(dir / "transient_before.csv");
    o.files.push_back(dir / "transient_after.csv");
  }
  const auto summary = dir / "summary.txt";
  std::ofstream file(summary, std::ios::binary | std::ios::trunc);
  file << o.summary;
  if (!file) throw IoError("failed writing '" + summary.string() + "'");
  o.files.push_back(summary);
}

namespace {

std::vector<ConfigEntry> dotted_overrides(const std::vector<std::string>& extras) {
  std::vector<ConfigEntry> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.find('.') == std::string::npos) {
      throw ConfigError("unexpected argument '" + arg + "'");
    }
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      out.push_back({arg.substr(2, eq - 2), arg.substr(eq + 1), 0});
    } else if (i + 1 < extras.size()) {
      out.push_back({arg.substr(2), extras[++i], 0});
    } else {
      throw ConfigError("missing value for '" + arg + "'");
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transient interference simulator for Mach-Zehnder networks and double slits",
               "mzsim"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run a scenario preset or a custom configuration");
  std::string scenario;
  std::string model;
  std::string config_path;
  std::string out_dir;
  bool dump = false;
  run->add_option("--scenario", scenario, "fig2, fig4a, fig4b, fig4c, fig7, doubleslit_sweep, "
                                          "doubleslit_transient or custom");
  run->add_option("--model", model, "local, nonlocal or both");
  run->add_option("--config", config_path, "Sectioned key = value configuration file");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--dump-config", dump, "Print the effective configuration and exit");
  run->allow_extras();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mzsim: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    std::vector<ConfigEntry> file_entries;
    if (!config_path.empty()) file_entries = parse_config_text(read_file(config_path));
    auto overrides = dotted_overrides(run->remaining());
    if (!scenario.empty()) overrides.push_back({"run.scenario", scenario, 0});
    if (!model.empty()) overrides.push_back({"run.model", model, 0});
    if (!out_dir.empty()) overrides.push_back({"output.dir", out_dir, 0});
    const ScenarioConfig cfg = resolve_config(file_entries, overrides);
    validate_config(cfg);
    if (dump) {
      out << dump_config(cfg);
      return kExitOk;
    }
    auto outcome = run_scenario(cfg);
    write_outputs(outcome);
    out << outcome.summary;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "mzsim: configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "mzsim: error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace mzsim
