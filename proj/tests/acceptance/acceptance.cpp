// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mzsim/csv.hpp"
#include "mzsim/runner.hpp"

namespace {

using namespace mzsim;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Worst |sum of detector powers + diverted - 1| seen by any simulation in criteria 1 to 3.
double g_energy_error = 0.0;
std::size_t g_energy_samples = 0;

void track_energy(const SimulationResult& r) {
  for (std::size_t i = 0; i < r.diverted.size(); ++i) {
    double total = r.diverted[i];
    for (const auto& t : r.traces) total += t.powers[i];
    g_energy_error = std::max(g_energy_error, std::abs(total - 1.0));
    ++g_energy_samples;
  }
}

Check fig7_reproduction() {
  Check c;
  const auto cfg = default_config(Scenario::fig7);
  const auto o = run_scenario(cfg);
  const double dt = cfg.sim.dt;
  const auto* local = o.model(PropagationModel::local);
  const auto* nonlocal = o.model(PropagationModel::nonlocal);
  c.require(local && nonlocal && local->earliest && nonlocal->earliest, "missing onset");
  if (!c.ok) return c;
  for (const auto& m : o.models) track_energy(m.result);

  const double flight = 15.0 / kSpeedOfLight;
  const auto& nl = *nonlocal->earliest;
  const auto& lo = *local->earliest;
  // one sample of slack plus rounding in t_start + i dt
  const double tol = dt * (1.0 + 1e-9);
  c.require(std::abs(nl.onset_time) <= tol, fmt("nonlocal onset %.3f ns", nl.onset_time * 1e9));
  c.require(std::abs(nl.settle_time - 10e-9) <= tol,
            fmt("nonlocal settle %.3f ns", nl.settle_time * 1e9));
  c.require(std::abs(lo.onset_time - flight) <= tol, fmt("local onset %.3f ns", lo.onset_time * 1e9));
  c.require(std::abs(lo.settle_time - (flight + 10e-9)) <= tol,
            fmt("local settle %.3f ns", lo.settle_time * 1e9));
  const auto& d = o.discrimination.front();
  c.require(d.verdict == Verdict::pass && std::abs(d.difference - 50e-9) <= 2 * tol,
            fmt("difference %.3f ns", d.difference * 1e9));
  c.detail += fmt("nonlocal %.1f/%.1f ns, ", nl.onset_time * 1e9, nl.settle_time * 1e9) +
              fmt("local %.1f/%.1f ns, ", lo.onset_time * 1e9, lo.settle_time * 1e9) +
              fmt("difference %.1f ns vs %.3f ns", d.difference * 1e9, flight * 1e9);
  return c;
}

Check balanced_ports() {
  Check c;
  const auto net = build_mzi({});
  const SimParams window{-20e-9, 100e-9, 0.5e-9, {}};
  double worst_on = 0.0;
  double worst_off = 0.0;
  SwitchingSchedule off;
  off.initial_levels = {{"aom2", 0.0}};
  for (auto model : {PropagationModel::local, PropagationModel::nonlocal}) {
    const auto on = simulate(net, {}, model, window);
    const auto dark = simulate(net, off, model, window);
    track_energy(on);
    track_energy(dark);
    for (std::size_t i = 0; i < on.diverted.size(); ++i) {
      worst_on = std::max({worst_on, std::abs(on.trace("det1").powers[i] - 1.0),
                           std::abs(on.trace("det2").powers[i])});
      worst_off = std::max({worst_off, std::abs(dark.trace("det1").powers[i] - 0.25),
                            std::abs(dark.trace("det2").powers[i] - 0.25)});
    }
  }
  c.require(worst_on <= 1e-9, fmt("all-on deviation %.3g", worst_on));
  c.require(worst_off <= 1e-9, fmt("AOM2-off deviation %.3g", worst_off));
  c.detail += fmt("max deviation %.2g (on), %.2g (AOM2 off)", worst_on, worst_off);
  return c;
}

Check oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SimParams window{0.0, 100e-9, 0.5e-9, {}};
  double worst = 0.0;
  const int configs = 128;
  for (int k = 0; k < configs; ++k) {
    MziSpec spec;
    spec.arm_phase = 2.0 * 3.141592653589793 * u(rng);
    spec.aom1_position = 14.0 * u(rng);
    spec.aom2_position = 14.0 * u(rng);
    const auto net = build_mzi(spec);
    SwitchingSchedule sched;
    sched.initial_levels = {{"aom1", u(rng)}, {"aom2", u(rng)}};
    const auto oracle = analytic_oracle(net, sched.initial_levels);
    const auto model = k % 2 == 0 ? PropagationModel::local : PropagationModel::nonlocal;
    const auto r = simulate(net, sched, model, window);
    track_energy(r);
    for (const auto& t : r.traces) {
      for (double p : t.powers) worst = std::max(worst, std::abs(p - oracle.at(t.detector_id)));
    }
  }
  c.require(worst <= 1e-6, fmt("max |simulate - oracle| %.3g", worst));
  c.detail += fmt("%.0f configurations, max |simulate - oracle| = %.2g", configs, worst);
  return c;
}

Check energy_conservation() {
  Check c;
  c.require(g_energy_samples > 0, "no samples recorded");
  c.require(g_energy_error <= 1e-9, fmt("max error %.3g", g_energy_error));
  c.detail += fmt("%.0f samples, max |P1 + P2 + diverted - 1| = %.2g",
                  static_cast<double>(g_energy_samples), g_energy_error);
  return c;
}

Check fig2_visibility() {
  Check c;
  const auto o = run_scenario(default_config(Scenario::fig2));
  const auto* local = o.model(PropagationModel::local);
  const auto* nonlocal = o.model(PropagationModel::nonlocal);
  c.require(local && nonlocal && local->visibility && nonlocal->visibility, "missing visibility");
  if (!c.ok) return c;
  const double vl = local->visibility->visibility;
  const double vn = nonlocal->visibility->visibility;
  c.require(vl > 0.99, fmt("local V %.6f", vl));
  c.require(vn < 0.01, fmt("nonlocal V %.6f", vn));
  c.require(o.warnings.empty(), "packet had not passed the AOM");
  c.detail += fmt("V local %.6f, V nonlocal %.6f", vl, vn);
  return c;
}

Check coherence_gating() {
  Check c;
  const auto cfg = default_config(Scenario::fig4c);
  const auto net = build_mzi(cfg.network);
  Fig4cSetup setup;
  setup.mzi = cfg.network;
  setup.packet1 = {-100e-9 - delay_from_source(net, "aom2"), cfg.source.wavelength,
                   cfg.source.coherence_length, 1.0};
  setup.schedule = cfg.schedule;
  const double tc = setup.packet1.coherence_length / kSpeedOfLight;
  // long enough for the latest packet to clear the detectors
  setup.sim = {-600e-9, 10.0 * tc + 900e-9, 1e-9, {}};
  setup.phase_steps = 4;
  const double expected[] = {1.0, std::exp(-1.0), 0.0};
  const double delays[] = {0.0, tc, 10.0 * tc};
  double weights[3] = {};
  for (int k = 0; k < 3; ++k) {
    WavePacket p2 = setup.packet1;
    p2.emit_time += delays[k];
    setup.packet2 = p2;
    weights[k] = run_fig4c_scenario(setup, PropagationModel::local).interference_weight.value();
  }
  c.require(std::abs(weights[0] - expected[0]) <= 1e-9, fmt("delay 0 weight %.12f", weights[0]));
  c.require(std::abs(weights[1] - expected[1]) <= 1e-9, fmt("delay Lc/c weight %.12f", weights[1]));
  c.require(weights[2] < 1e-6, fmt("delay 10 Lc/c weight %.3g", weights[2]));
  c.detail += fmt("weights %.9f, %.9f, %.3g", weights[0], weights[1], weights[2]);
  return c;
}

Check diffraction_regimes() {
  Check c;
  const auto cfg = default_config(Scenario::doubleslit_sweep);
  const auto o = run_scenario(cfg);
  const auto& geom = cfg.diffraction.geometry;
  for (const auto& row : o.regimes) {
    c.require(row.profile.convergence < 1e-3, fmt("z = %g m convergence %.3g", row.z,
                                                  row.profile.convergence));
    if (row.z == 5e-3) {
      const auto& pos = row.regime.dominant_positions;
      c.require(row.regime.regime == Regime::near_two_lines, "z = 5 mm not near_two_lines");
      c.require(pos.size() == 2 && std::abs(pos[0] + 0.3e-3) <= 0.045e-3 &&
                    std::abs(pos[1] - 0.3e-3) <= 0.045e-3,
                "z = 5 mm peaks off +/-0.3 mm");
      if (pos.size() == 2) c.detail += fmt("5 mm peaks %.4f/%.4f mm, ", pos[0] * 1e3, pos[1] * 1e3);
    } else if (row.z == 3.0) {
      const double expected = geom.wavelength * row.z / geom.separation;
      c.require(row.regime.regime == Regime::far_fringes, "z = 3 m not far_fringes");
      c.require(row.spacing && std::abs(*row.spacing - expected) <= 0.02 * expected,
                "z = 3 m spacing off");
      if (row.spacing) {
        c.detail += fmt("3 m spacing %.4f mm vs %.4f mm, ", *row.spacing * 1e3, expected * 1e3);
      }
    } else {
      c.detail += "z = " + fmt("%g", row.z) + " m " + std::string(to_string(row.regime.regime)) +
                  fmt(" (%.0f maxima), ", static_cast<double>(row.regime.dominant_positions.size()));
    }
  }
  // one open slit against the bare aperture integral
  SlitGeometry one = geom;
  one.open = OpenSlits::first;
  const auto grid = default_grid(one, 3.0);
  const auto p = slit_pattern(one, 3.0, grid);
  const auto xs = screen_coordinates(grid);
  const auto u = aperture_amplitude(one.centre(1), one.width, one.wavelength, 3.0, xs,
                                    p.nodes_per_slit);
  bool identical = true;
  for (std::size_t i = 0; i < xs.size(); ++i) identical = identical && p.intensity[i] == std::norm(u[i]);
  c.require(identical, "single-slit profile not bit-identical");
  c.detail += identical ? "single slit bit-identical" : "single slit differs";
  return c;
}

Check slit_transient() {
  Check c;
  const auto cfg = default_config(Scenario::doubleslit_transient);
  const auto o = run_scenario(cfg);
  const double dt = cfg.sim.dt;
  const double front = cfg.diffraction.switch_time + cfg.diffraction.transient_distance / kSpeedOfLight;
  for (const auto& t : o.transients) {
    const double want = t.model == PropagationModel::local ? front : cfg.diffraction.switch_time;
    c.require(t.observed_change && std::abs(*t.observed_change - want) <= dt * (1.0 + 1e-9),
              std::string(to_string(t.model)) + " change time off");
    c.require(std::abs(t.predicted_change - want) <= 1e-18, "predicted time off");
    if (t.observed_change) {
      c.detail += std::string(to_string(t.model)) +
                  fmt(" changes at %.3f ns (front %.3f ns), ", *t.observed_change * 1e9, want * 1e9);
    }
  }
  c.require(o.transients.size() == 2, "expected both models");
  return c;
}

Check property_suites() {
  Check c;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double unitarity = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const Amplitude a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const auto out = beam_splitter_scatter(a, b);
    const double in = power(a) + power(b);
    unitarity = std::max(unitarity, std::abs(power(out.c) + power(out.d) - in) / in);
  }
  c.require(unitarity <= 1e-12, fmt("unitarity %.3g", unitarity));

  double scale = 0.0;
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> scan(16);
    for (auto& v : scan) v = std::abs(u(rng));
    const double factor = std::pow(10.0, 10.0 * u(rng));
    auto scaled = scan;
    for (auto& v : scaled) v *= factor;
    scale = std::max(scale, std::abs(visibility_from_scan(scan).visibility -
                                     visibility_from_scan(scaled).visibility));
  }
  c.require(scale <= 1e-12, fmt("visibility scale error %.3g", scale));

  // translation: delaying the trace content by k samples delays the onset by exactly k samples
  const auto net = build_mzi({});
  const SwitchingSchedule sched{10e-9, {{"aom2", false, 0.0}}, {}};
  const SimParams window{-20e-9, 100e-9, 0.5e-9, {}};
  const auto base = simulate(net, sched, PropagationModel::nonlocal, window).trace("det1");
  const auto base_onset = detect_onset(base);
  bool equivariant = base_onset.has_value();
  for (int k : {1, 3, 17, 60}) {
    auto moved = base;
    for (std::size_t i = 0; i < moved.powers.size(); ++i) {
      moved.powers[i] = i < static_cast<std::size_t>(k) ? base.powers[0] : base.powers[i - k];
    }
    const auto r = detect_onset(moved);
    equivariant = equivariant && r &&
                  std::llround((r->onset_time - base_onset->onset_time) / window.dt) == k &&
                  std::llround((r->settle_time - base_onset->settle_time) / window.dt) == k;
  }
  c.require(equivariant, "onset not translation-equivariant");

  double refinement = 0.0;
  for (auto model : {PropagationModel::local, PropagationModel::nonlocal}) {
    SimParams fine = window;
    fine.dt = window.dt / 2;
    const auto a = detect_onset(simulate(net, sched, model, window).trace("det1"), {0.01, 10e-9});
    const auto b = detect_onset(simulate(net, sched, model, fine).trace("det1"), {0.01, 10e-9});
    refinement = std::max(refinement, a && b ? std::abs(a->onset_time - b->onset_time) : 1.0);
  }
  c.require(refinement <= window.dt, fmt("dt refinement shift %.3f ns", refinement * 1e9));

  const auto cfg = default_config(Scenario::fig7);
  const auto first = run_scenario(cfg);
  const auto second = run_scenario(cfg);
  bool same = first.summary == second.summary;
  for (std::size_t m = 0; m < first.models.size(); ++m) {
    same = same && format_csv(trace_series(first.models[m].result.traces)) ==
                       format_csv(trace_series(second.models[m].result.traces));
  }
  c.require(same, "CSV output differs between runs");

  c.detail += fmt("unitarity %.2g, scale %.2g, ", unitarity, scale) +
              fmt("dt-refinement shift %.2f ns, ", refinement * 1e9) +
              (equivariant ? "onset equivariant, " : "onset not equivariant, ") +
              (same ? "CSV byte-identical" : "CSV differs");
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "fig7 onsets and model discrimination", 1.0, fig7_reproduction},
      {2, "balanced-port identity", 1.0, balanced_ports},
      {3, "oracle equivalence", 10.0, oracle_equivalence},
      {4, "energy conservation", 1.0, energy_conservation},
      {5, "fig2 in-flight packet visibility", 1.0, fig2_visibility},
      {6, "fig4c coherence gating", 1.0, coherence_gating},
      {7, "double-slit regimes", 10.0, diffraction_regimes},
      {8, "slit transient timing", 1.0, slit_transient},
      {9, "property suites", 10.0, property_suites},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.limit_s) {
      result.ok = false;
      result.detail += fmt("; runtime %.2f s exceeds %.0f s", secs, cr.limit_s);
    }
    while (result.detail.ends_with(", ")) result.detail.resize(result.detail.size() - 2);
    if (!result.ok) ++failures;
    std::printf("%s criterion %d: %s (%s) [%.3f s]\n", result.ok ? "PASS" : "FAIL", cr.id, cr.name,
                result.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
