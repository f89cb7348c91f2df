#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mzsim/analysis.hpp"
#include "mzsim/engine.hpp"
#include "mzsim/network.hpp"

namespace mzsim {

/// Runs the local and nonlocal models on the same inputs, concurrently.
struct ModelPair {
  SimulationResult local;
  SimulationResult nonlocal;
};
ModelPair simulate_both(const OpticalNetwork& net, const SwitchingSchedule& sched,
                        const SimParams& params);

/// Flight time from `component` to `detector` along the first path through it.
double delay_to_detector(const OpticalNetwork& net, std::string_view component,
                         std::string_view detector);
/// Flight time from the source to `component`.
double delay_from_source(const OpticalNetwork& net, std::string_view component);

/// Energy collected by `detector` over [window_lo, window_hi] (sum of power * dt).
double integrated_energy(const DetectorTrace& trace, double window_lo, double window_hi);

/// Fringe visibility from sweeping the arm-B phase over one period: the interferometer is rebuilt
/// with arm_phase + 2 pi j / steps, simulated, and the detector energy inside the window recorded.
VisibilityReport phase_scan_visibility(const MziSpec& mzi, const SwitchingSchedule& sched,
                                       PropagationModel model, const SimParams& params,
                                       std::string_view detector, int steps, double window_lo,
                                       double window_hi);

/// Single pulsed packet that crosses the switched AOMs before they turn off.
struct Fig2Setup {
  MziSpec mzi;
  WavePacket packet{0.0, 633e-9, 0.3, 1.0};  // short packet, incoherent source
  double pass_time = -20e-9;                // packet centre crosses the reference AOM
  std::string reference_aom = "aom2";
  SwitchingSchedule schedule{10e-9, {{"aom2", false, 0.0}}, {}};
  SimParams sim{-10e-9, 80e-9, 0.5e-9, {}};
  int phase_steps = 16;

  /// Packet with emit_time derived from pass_time.
  WavePacket emitted_packet(const OpticalNetwork& net) const;
};

struct Fig2Result {
  SimulationResult local;
  SimulationResult nonlocal;
  VisibilityReport visibility_local;
  VisibilityReport visibility_nonlocal;
  std::vector<std::string> warnings;
};

/// Both models on the pulsed scenario; visibility from a det1 phase scan. Emits a warning (and
/// still runs) when the packet has not cleared a switched AOM by its switch time.
Fig2Result run_fig2_scenario(const Fig2Setup& setup);

struct Fig4cSetup {
  MziSpec mzi;
  WavePacket packet1;
  std::optional<WavePacket> packet2;
  SwitchingSchedule schedule;
  SimParams sim;
  int phase_steps = 16;
};

struct Fig4cResult {
  SimulationResult traces;
  std::optional<double> relative_delay;       // packet 2 minus packet 1 arrival at BS2
  std::optional<double> interference_weight;  // coherence of the packet 1/2 cross term
  std::vector<VisibilityReport> packet_visibility;
  std::vector<std::string> warnings;
};

/// Two sequential packets; the cross term between their envelopes at BS2 is weighted by their
/// mutual coherence. Mismatched wavelengths force the weight to 0 with a warning.
Fig4cResult run_fig4c_scenario(const Fig4cSetup& setup, PropagationModel model);

}  // namespace mzsim
