#include <gtest/gtest.h>

#include <cmath>

#include "mzsim/errors.hpp"
#include "mzsim/scenarios.hpp"

namespace {

using mzsim::PropagationModel;

TEST(Delays, AomToDetectorAndSourceToAom) {
  const auto net = mzsim::build_mzi({});
  const double c = mzsim::kSpeedOfLight;
  EXPECT_NEAR(mzsim::delay_to_detector(net, "aom2", "det1"), (15.0 - 2e-3) / c, 1e-17);
  EXPECT_NEAR(mzsim::delay_from_source(net, "aom2"), 2e-3 / c, 1e-17);
  EXPECT_THROW(mzsim::delay_to_detector(net, "nothing", "det1"), mzsim::LookupError);
}

TEST(Fig2, LocalInterferesNonlocalDoesNot) {
  const auto r = mzsim::run_fig2_scenario({});
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_GT(r.visibility_local.visibility, 0.99);
  EXPECT_LT(r.visibility_nonlocal.visibility, 0.01);
}

TEST(Fig2, NonlocalSplitsPacketPowerIntoQuarters) {
  mzsim::Fig2Setup setup;
  const auto r = mzsim::run_fig2_scenario(setup);
  const auto net = mzsim::build_mzi(setup.mzi);
  const auto packet = setup.emitted_packet(net);
  const double flight = 15.0 / mzsim::kSpeedOfLight;
  const auto& d1 = r.nonlocal.trace("det1");
  const auto& d2 = r.nonlocal.trace("det2");
  for (std::size_t i = 0; i < d1.times.size(); ++i) {
    const double env = mzsim::packet_envelope(d1.times[i], packet, flight);
    EXPECT_NEAR(d1.powers[i], 0.25 * env * env, 1e-12);
    EXPECT_NEAR(d2.powers[i], 0.25 * env * env, 1e-12);
  }
  // local: the packet crossed before the switch, so det1 gets it all
  for (std::size_t i = 0; i < d1.times.size(); ++i) {
    const double env = mzsim::packet_envelope(d1.times[i], packet, flight);
    EXPECT_NEAR(r.local.trace("det1").powers[i], env * env, 1e-12);
    EXPECT_NEAR(r.local.trace("det2").powers[i], 0.0, 1e-12);
  }
}

TEST(Fig2, NeverSwitchedModelsAgree) {
  mzsim::Fig2Setup setup;
  setup.schedule.events.clear();
  const auto r = mzsim::run_fig2_scenario(setup);
  for (std::size_t d = 0; d < r.local.traces.size(); ++d) {
    EXPECT_EQ(r.local.traces[d].powers, r.nonlocal.traces[d].powers);
  }
  EXPECT_DOUBLE_EQ(r.visibility_local.visibility, r.visibility_nonlocal.visibility);
}

TEST(Fig2, LatePacketWarnsButRuns) {
  mzsim::Fig2Setup setup;
  setup.pass_time = -1e-9;
  const auto r = mzsim::run_fig2_scenario(setup);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_FALSE(r.local.traces.empty());
}

mzsim::Fig4cSetup two_packets(double delay_in_coherence_times) {
  mzsim::Fig4cSetup s;
  s.packet1 = {-200e-9, 633e-9, 50.0, 1.0};
  mzsim::WavePacket p2 = s.packet1;
  p2.emit_time += delay_in_coherence_times * s.packet1.sigma_t();
  s.packet2 = p2;
  s.sim = {-700e-9, 2200e-9, 2e-9, {}};
  s.phase_steps = 4;
  return s;
}

TEST(Fig4c, CoherenceWeightFollowsRelativeDelay) {
  const auto zero = mzsim::run_fig4c_scenario(two_packets(0.0), PropagationModel::local);
  const auto one = mzsim::run_fig4c_scenario(two_packets(1.0), PropagationModel::local);
  const auto ten = mzsim::run_fig4c_scenario(two_packets(10.0), PropagationModel::local);
  EXPECT_NEAR(*zero.interference_weight, 1.0, 1e-9);
  EXPECT_NEAR(*one.interference_weight, std::exp(-1.0), 1e-9);
  EXPECT_LT(*ten.interference_weight, 1e-6);
  EXPECT_EQ(zero.packet_visibility.size(), 2u);
}

TEST(Fig4c, AbsentSecondPacketMatchesSinglePacketRun) {
  auto setup = two_packets(1.0);
  setup.packet2.reset();
  const auto r = mzsim::run_fig4c_scenario(setup, PropagationModel::nonlocal);
  const auto net = mzsim::build_mzi(setup.mzi);
  mzsim::SimParams params = setup.sim;
  params.packets = {setup.packet1};
  const auto single = mzsim::simulate(net, setup.schedule, PropagationModel::nonlocal, params);
  for (std::size_t d = 0; d < single.traces.size(); ++d) {
    EXPECT_EQ(r.traces.traces[d].powers, single.traces[d].powers);
  }
  EXPECT_FALSE(r.interference_weight);
}

TEST(Fig4c, MismatchedWavelengthsAreIncoherent) {
  auto setup = two_packets(0.0);
  setup.packet2->wavelength = 532e-9;
  const auto r = mzsim::run_fig4c_scenario(setup, PropagationModel::local);
  EXPECT_EQ(*r.interference_weight, 0.0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(PhaseScan, PartialArmGivesTwoBeamVisibility) {
  // AOM2 amplitude 0.5 leaves 0.25 of the arm power: V = 2 sqrt(0.25) / 1.25
  mzsim::SwitchingSchedule sched;
  sched.initial_levels = {{"aom2", 0.5}};
  const auto v = mzsim::phase_scan_visibility({}, sched, PropagationModel::local,
                                              {0.0, 10e-9, 0.5e-9, {}}, "det1", 16, 0.0, 10e-9);
  EXPECT_NEAR(v.visibility, 0.8, 1e-12);
  EXPECT_NEAR(mzsim::two_beam_visibility(1.0, 0.25).visibility, 0.8, 1e-15);
}

}  // namespace

namespace {

TEST(Fig4c, PacketOutsideWindowIsReported) {
  mzsim::Fig4cSetup s;
  s.packet1 = {0.0, 633e-9, 0.3, 1.0};
  s.sim = {-50e-9, -10e-9, 1e-9, {}};
  EXPECT_THROW(mzsim::run_fig4c_scenario(s, mzsim::PropagationModel::local), mzsim::AnalysisError);
}

}  // namespace
