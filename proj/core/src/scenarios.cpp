#include "mzsim/scenarios.hpp"

#include <algorithm>
#include <future>
#include <numbers>

#include "mzsim/errors.hpp"

namespace mzsim {

ModelPair simulate_both(const OpticalNetwork& net, const SwitchingSchedule& sched,
                        const SimParams& params) {
  auto local = std::async(std::launch::async, [&] {
    return simulate(net, sched, PropagationModel::local, params);
  });
  SimulationResult nonlocal = simulate(net, sched, PropagationModel::nonlocal, params);
  return {local.get(), std::move(nonlocal)};
}

double delay_to_detector(const OpticalNetwork& net, std::string_view component,
                         std::string_view detector) {
  for (const auto& rec : enumerate_paths(net, detector)) {
    if (const PathHop* hop = rec.hop(component)) return hop->delay_to_detector;
  }
  throw LookupError("no path from '" + std::string(component) + "' to '" +
                    std::string(detector) + "'");
}

double delay_from_source(const OpticalNetwork& net, std::string_view component) {
  const auto paths = enumerate_paths_to(net, component);
  if (paths.empty()) {
    throw LookupError("component '" + std::string(component) + "' is not reachable");
  }
  return paths.front().total_delay;
}

double integrated_energy(const DetectorTrace& trace, double window_lo, double window_hi) {
  if (trace.times.size() < 2) return 0.0;
  const double dt = trace.times[1] - trace.times[0];
  double energy = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] >= window_lo && trace.times[i] <= window_hi) energy += trace.powers[i] * dt;
  }
  return energy;
}

VisibilityReport phase_scan_visibility(const MziSpec& mzi, const SwitchingSchedule& sched,
                                       PropagationModel model, const SimParams& params,
                                       std::string_view detector, int steps, double window_lo,
                                       double window_hi) {
  if (steps < 2) throw AnalysisError("phase scan needs at least two steps");
  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(steps));
  for (int j = 0; j < steps; ++j) {
    MziSpec spec = mzi;
    spec.arm_phase += 2.0 * std::numbers::pi * j / steps;
    const auto net = build_mzi(spec);
    const auto result = simulate(net, sched, model, params);
    energies.push_back(integrated_energy(result.trace(detector), window_lo, window_hi));
  }
  return visibility_from_scan(energies);
}

WavePacket Fig2Setup::emitted_packet(const OpticalNetwork& net) const {
  WavePacket p = packet;
  p.emit_time = pass_time - delay_from_source(net, reference_aom);
  return p;
}

namespace {

constexpr double kEnvelopeClearance = 5.0;  // sigma_t

void check_packet_cleared(const OpticalNetwork& net, const SwitchingSchedule& sched,
                          const WavePacket& packet, std::vector<std::string>& warnings) {
  for (const auto& e : sched.events) {
    if (e.on) continue;
    const double tail = packet.emit_time + delay_from_source(net, e.component) +
                        kEnvelopeClearance * packet.sigma_t();
    if (tail > e.time) {
      warnings.push_back("packet has not fully passed " + e.component + " when it switches off");
    }
  }
}

}  // namespace

Fig2Result run_fig2_scenario(const Fig2Setup& setup) {
  const auto net = build_mzi(setup.mzi);
  SimParams params = setup.sim;
  params.packets = {setup.emitted_packet(net)};

  Fig2Result r;
  check_packet_cleared(net, setup.schedule, params.packets.front(), r.warnings);
  auto both = simulate_both(net, setup.schedule, params);
  r.local = std::move(both.local);
  r.nonlocal = std::move(both.nonlocal);
  const std::string det(mzi_ids::det1);
  r.visibility_local = phase_scan_visibility(setup.mzi, setup.schedule, PropagationModel::local,
                                             params, det, setup.phase_steps, params.t_start,
                                             params.t_end);
  r.visibility_nonlocal = phase_scan_visibility(setup.mzi, setup.schedule,
                                                PropagationModel::nonlocal, params, det,
                                                setup.phase_steps, params.t_start, params.t_end);
  return r;
}

Fig4cResult run_fig4c_scenario(const Fig4cSetup& setup, PropagationModel model) {
  const auto net = build_mzi(setup.mzi);
  SimParams params = setup.sim;
  params.packets = {setup.packet1};
  if (setup.packet2) params.packets.push_back(*setup.packet2);

  Fig4cResult r;
  r.traces = simulate(net, setup.schedule, model, params);
  if (setup.packet2) {
    const auto& p1 = setup.packet1;
    const auto& p2 = *setup.packet2;
    if (p1.wavelength != p2.wavelength) {
      r.warnings.push_back("packets differ in wavelength: incoherent, interference term set to 0");
    }
    // Both packets traverse the same arms, so arrival times differ by the emission offset.
    r.relative_delay = p2.emit_time - p1.emit_time;
    r.interference_weight = packet_pair_coherence(p1, p2, *r.relative_delay);
  }

  const std::string det(mzi_ids::det1);
  const double flight = enumerate_paths(net, det).front().total_delay;
  for (std::size_t k = 0; k < params.packets.size(); ++k) {
    const auto& p = params.packets[k];
    const double centre = p.emit_time + flight;
    const double half = 3.0 * p.sigma_t();
    const double lo = std::max(centre - half, params.t_start);
    const double hi = std::min(centre + half, params.t_end);
    if (lo >= hi) {
      throw AnalysisError("packet " + std::to_string(k + 1) +
                          " reaches the detectors outside the simulated window");
    }
    r.packet_visibility.push_back(phase_scan_visibility(setup.mzi, setup.schedule, model, params,
                                                        det, setup.phase_steps, lo, hi));
  }
  return r;
}

}  // namespace mzsim
