#include "mzsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mzsim/errors.hpp"

namespace mzsim {

std::string_view to_string(PropagationModel model) {
  return model == PropagationModel::local ? "local" : "nonlocal";
}

std::map<std::string, AomTimeline> compile_schedule(const OpticalNetwork& net,
                                                    const SwitchingSchedule& sched) {
  auto require_aom = [&](const std::string& id) -> const Component& {
    const Component* c = net.find(id);
    if (c == nullptr) throw ScheduleError("schedule references unknown component '" + id + "'");
    if (c->kind != ComponentKind::aom) {
      throw ScheduleError("schedule references non-AOM component '" + id + "'");
    }
    return *c;
  };
  std::map<std::string, std::vector<AomEvent>> per_aom;
  for (const auto& e : sched.events) {
    require_aom(e.component);
    per_aom[e.component].push_back({e.time, e.on});
  }
  for (const auto& [id, level] : sched.initial_levels) require_aom(id);

  std::map<std::string, AomTimeline> out;
  for (const auto& id : net.ids_of(ComponentKind::aom)) {
    const Component& c = net.at(id);
    const double ramp = c.params.ramp_duration.value_or(sched.ramp_duration);
    auto level = sched.initial_levels.find(id);
    auto events = per_aom.find(id);
    out.emplace(id, AomTimeline(level == sched.initial_levels.end() ? 1.0 : level->second,
                                events == per_aom.end() ? std::vector<AomEvent>{} : events->second,
                                ramp));
  }
  return out;
}

std::size_t SimParams::sample_count() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(dt)) {
    throw SimulationError("simulation times must be finite");
  }
  if (!(t_end > t_start)) throw SimulationError("t_end must exceed t_start");
  if (!(dt > 0.0)) throw SimulationError("dt must be positive");
  const double steps = (t_end - t_start) / dt;
  if (steps > static_cast<double>(kMaxSamples)) {
    throw SimulationError("sample count exceeds the 1e7 guard");
  }
  return static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
}

const DetectorTrace& SimulationResult::trace(std::string_view detector_id) const {
  for (const auto& t : traces) {
    if (t.detector_id == detector_id) return t;
  }
  throw LookupError("no trace for detector '" + std::string(detector_id) + "'");
}

double packet_pair_coherence(const WavePacket& a, const WavePacket& b, double delay) {
  if (a.wavelength != b.wavelength) return 0.0;
  const double ta = a.sigma_t();
  const double tb = b.sigma_t();
  const double tau = ta == tb ? ta : std::sqrt(0.5 * (ta * ta + tb * tb));
  return coherence_factor_for_time(delay, tau);
}

namespace {

// A time-dependent element on a path, with its flight time to the observation point.
struct AomTap {
  const AomTimeline* timeline;
  double delay_to_end;
};

struct DriftTap {
  double amplitude;
  double period;
  double delay_to_end;
};

struct CompiledPath {
  Amplitude amplitude;
  double delay;  // source to observation point
  std::vector<AomTap> aoms;
  std::vector<DriftTap> drifts;
};

CompiledPath compile_path(const OpticalNetwork& net, const PathRecord& rec,
                          const std::map<std::string, AomTimeline>& timelines,
                          double extra_delay) {
  CompiledPath p{rec.static_amplitude, rec.total_delay, {}, {}};
  for (const auto& hop : rec.hops) {
    if (hop.component == rec.components.back()) continue;
    if (hop.kind == ComponentKind::aom) {
      p.aoms.push_back({&timelines.at(hop.component), hop.delay_to_detector + extra_delay});
    } else if (hop.kind == ComponentKind::delay_line) {
      const auto& params = net.at(hop.component).params;
      if (params.drift_amplitude != 0.0) {
        p.drifts.push_back(
            {params.drift_amplitude, params.drift_period, hop.delay_to_detector + extra_delay});
      }
    }
  }
  return p;
}

double sample_time(PropagationModel model, double t, double delay_to_end) {
  return model == PropagationModel::local ? t - delay_to_end : t;
}

// Field factor of one path at observation time t, excluding the source envelope.
Amplitude path_factor(const CompiledPath& p, PropagationModel model, double t) {
  Amplitude a = p.amplitude;
  for (const auto& tap : p.aoms) {
    a *= tap.timeline->transmission(sample_time(model, t, tap.delay_to_end));
  }
  for (const auto& d : p.drifts) {
    const double tau = sample_time(model, t, d.delay_to_end);
    a *= std::polar(1.0, d.amplitude * std::sin(2.0 * std::numbers::pi * tau / d.period));
  }
  return a;
}

struct Contribution {
  Amplitude field;
  double arrival;  // emission time + path delay
  std::size_t packet;
};

class PowerAccumulator {
 public:
  PowerAccumulator(const std::vector<WavePacket>& packets) : packets_(packets) {}

  // Power carried by `paths` at time t; packet envelopes are read at `envelope_time`.
  double power(const std::vector<CompiledPath>& paths, PropagationModel model, double t,
               double envelope_time) {
    if (packets_.empty()) {
      Amplitude field{0.0, 0.0};
      for (const auto& p : paths) field += path_factor(p, model, t);
      return std::norm(field);
    }
    scratch_.clear();
    for (const auto& p : paths) {
      const Amplitude f = path_factor(p, model, t);
      for (std::size_t k = 0; k < packets_.size(); ++k) {
        const double env = packet_envelope(envelope_time, packets_[k], p.delay);
        scratch_.push_back({f * env, packets_[k].emit_time + p.delay, k});
      }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < scratch_.size(); ++i) {
      total += std::norm(scratch_[i].field);
      for (std::size_t j = i + 1; j < scratch_.size(); ++j) {
        const auto& a = scratch_[i];
        const auto& b = scratch_[j];
        const double gamma = packet_pair_coherence(packets_[a.packet], packets_[b.packet],
                                                   a.arrival - b.arrival);
        total += 2.0 * (a.field * std::conj(b.field)).real() * gamma;
      }
    }
    return std::max(total, 0.0);
  }

 private:
  const std::vector<WavePacket>& packets_;
  std::vector<Contribution> scratch_;
};

struct DivertingAom {
  const AomTimeline* timeline;
  double delay_to_detector;
  std::vector<CompiledPath> feeds;  // source to AOM input
};

}  // namespace

SimulationResult simulate(const OpticalNetwork& net, const SwitchingSchedule& sched,
                          PropagationModel model, const SimParams& params) {
  const std::size_t n = params.sample_count();
  for (const auto& p : params.packets) p.validate();
  const auto timelines = compile_schedule(net, sched);

  SimulationResult result;
  for (std::size_t a = 0; a < params.packets.size(); ++a) {
    for (std::size_t b = a + 1; b < params.packets.size(); ++b) {
      if (params.packets[a].wavelength != params.packets[b].wavelength) {
        result.warnings.push_back("packets " + std::to_string(a + 1) + " and " +
                                  std::to_string(b + 1) +
                                  " have different wavelengths; treated as incoherent");
      }
    }
  }

  std::vector<std::vector<CompiledPath>> detector_paths;
  std::map<std::string, double> nearest_detector;
  for (const auto& det : net.detector_ids()) {
    std::vector<CompiledPath> compiled;
    for (const auto& rec : enumerate_paths(net, det)) {
      compiled.push_back(compile_path(net, rec, timelines, 0.0));
      for (const auto& hop : rec.hops) {
        if (hop.kind != ComponentKind::aom) continue;
        auto [it, inserted] = nearest_detector.emplace(hop.component, hop.delay_to_detector);
        if (!inserted) it->second = std::min(it->second, hop.delay_to_detector);
      }
    }
    detector_paths.push_back(std::move(compiled));
  }

  std::vector<DivertingAom> diverting;
  for (const auto& [id, delay] : nearest_detector) {
    DivertingAom d{&timelines.at(id), delay, {}};
    for (const auto& rec : enumerate_paths_to(net, id)) {
      d.feeds.push_back(compile_path(net, rec, timelines, delay));
    }
    diverting.push_back(std::move(d));
  }

  const auto detectors = net.detector_ids();
  result.traces.resize(detectors.size());
  for (std::size_t d = 0; d < detectors.size(); ++d) {
    result.traces[d].detector_id = detectors[d];
    result.traces[d].times.resize(n);
    result.traces[d].powers.resize(n);
  }
  result.diverted.resize(n);

  PowerAccumulator acc(params.packets);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = params.time_at(i);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      result.traces[d].times[i] = t;
      result.traces[d].powers[i] = acc.power(detector_paths[d], model, t, t);
    }
    double lost = 0.0;
    for (const auto& aom : diverting) {
      // Light reaching the detectors at t crossed this AOM at t - delay_to_detector.
      const double incident = acc.power(aom.feeds, model, t, t - aom.delay_to_detector);
      const double tr = aom.timeline->transmission(sample_time(model, t, aom.delay_to_detector));
      lost += incident * (1.0 - tr * tr);
    }
    result.diverted[i] = lost;
  }
  return result;
}

std::map<std::string, double> analytic_oracle(const OpticalNetwork& net,
                                              const std::map<std::string, double>& aom_levels) {
  for (const auto& [id, level] : aom_levels) {
    if (net.at(id).kind != ComponentKind::aom) {
      throw LookupError("'" + id + "' is not an AOM");
    }
    if (!(level >= 0.0 && level <= 1.0)) {
      throw DomainError("AOM transmission must lie in [0, 1]");
    }
  }
  std::map<std::string, double> out;
  for (const auto& det : net.detector_ids()) {
    Amplitude field{0.0, 0.0};
    for (const auto& rec : enumerate_paths(net, det)) {
      Amplitude a = rec.static_amplitude;
      for (const auto& hop : rec.hops) {
        if (hop.kind != ComponentKind::aom) continue;
        auto it = aom_levels.find(hop.component);
        if (it != aom_levels.end()) a *= it->second;
      }
      field += a;
    }
    out[det] = std::norm(field);
  }
  return out;
}

}  // namespace mzsim
