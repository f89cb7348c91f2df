#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mzsim/network.hpp"
#include "mzsim/optics.hpp"

namespace mzsim {

/// How a detector sample at time t sees upstream component states.
///   local:    state at t minus the flight time from the component to the detector
///   nonlocal: state at t itself
enum class PropagationModel { local, nonlocal };

std::string_view to_string(PropagationModel model);

struct SwitchEvent {
  std::string component;
  bool on = false;
  double time = 0.0;

  bool operator==(const SwitchEvent&) const = default;
};

struct SwitchingSchedule {
  double ramp_duration = 10e-9;
  std::vector<SwitchEvent> events;
  /// Static transmission before any event; AOMs absent here start fully on.
  std::map<std::string, double> initial_levels;

  bool operator==(const SwitchingSchedule&) const = default;
};

/// One timeline per AOM in `net`. Throws ScheduleError when an event targets a non-AOM or
/// unknown component, or when per-component ordering and spacing rules are broken.
std::map<std::string, AomTimeline> compile_schedule(const OpticalNetwork& net,
                                                    const SwitchingSchedule& sched);

struct SimParams {
  double t_start = 0.0;
  double t_end = 100e-9;
  double dt = 0.5e-9;
  /// Empty: continuous unit-power source. Otherwise the listed packets.
  std::vector<WavePacket> packets;

  bool pulsed() const { return !packets.empty(); }
  /// Number of samples on the inclusive grid; throws SimulationError on bad ranges or when the
  /// count exceeds kMaxSamples.
  std::size_t sample_count() const;
  double time_at(std::size_t i) const { return t_start + static_cast<double>(i) * dt; }

  bool operator==(const SimParams&) const = default;
};

inline constexpr std::size_t kMaxSamples = 10'000'000;

struct DetectorTrace {
  std::string detector_id;
  std::vector<double> times;   // s
  std::vector<double> powers;  // fraction of source power
};

struct SimulationResult {
  std::vector<DetectorTrace> traces;  // network detector order
  /// Power diverted into AOM first-order beams, on the same sample grid.
  std::vector<double> diverted;
  std::vector<std::string> warnings;

  const DetectorTrace& trace(std::string_view detector_id) const;
};

/// Time-stepped path-sum propagation.
///
/// Each path contributes its static amplitude times the product of AOM transmissions and drift
/// phases sampled under `model`. Continuous mode sums fields coherently; pulsed mode weights
/// every pair of (path, packet) contributions by the Gaussian mutual coherence of their source
/// emission times. Deterministic: identical inputs give bit-identical traces.
SimulationResult simulate(const OpticalNetwork& net, const SwitchingSchedule& sched,
                          PropagationModel model, const SimParams& params);

/// Closed-form detector powers |sum_p a_p t_p|^2 for static AOM transmissions
/// (missing AOMs count as fully on).
std::map<std::string, double> analytic_oracle(const OpticalNetwork& net,
                                              const std::map<std::string, double>& aom_levels);

/// Mutual coherence of two packets at relative delay. Zero when their wavelengths differ.
double packet_pair_coherence(const WavePacket& a, const WavePacket& b, double delay);

}  // namespace mzsim
