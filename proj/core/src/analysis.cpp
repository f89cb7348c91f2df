#include "mzsim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "mzsim/errors.hpp"

namespace mzsim {

namespace {
constexpr std::size_t kDefaultBaselineSamples = 20;
constexpr double kRangeFloor = 1e-12;
}  // namespace

std::optional<OnsetReport> detect_onset(const DetectorTrace& trace, const OnsetOptions& opts) {
  const auto& p = trace.powers;
  const std::size_t n = p.size();
  if (n < 3 || trace.times.size() != n) {
    throw AnalysisError("onset detection needs at least 3 samples with matching times");
  }
  const double dt = trace.times[1] - trace.times[0];
  if (!(dt > 0.0)) throw AnalysisError("trace times must increase");

  std::size_t n_base = kDefaultBaselineSamples;
  if (opts.baseline_window) {
    n_base = static_cast<std::size_t>(std::max(1LL, std::llround(*opts.baseline_window / dt)));
  }
  n_base = std::min(n_base, n);

  double baseline = 0.0;
  for (std::size_t i = 0; i < n_base; ++i) baseline += p[i];
  baseline /= static_cast<double>(n_base);

  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  const double band = opts.threshold * std::max(*hi - *lo, kRangeFloor);

  std::size_t onset = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(p[i] - baseline) > band) {
      onset = i;
      break;
    }
  }
  if (onset == n) return std::nullopt;

  const double final_value = p.back();
  std::size_t settle = onset;
  for (std::size_t i = n; i-- > onset;) {
    if (std::abs(p[i] - final_value) > band) {
      settle = i + 1;
      break;
    }
  }
  return OnsetReport{trace.detector_id, trace.times[onset], trace.times[settle], opts.threshold};
}

VisibilityReport visibility_from_extrema(double i_max, double i_min) {
  const double sum = i_max + i_min;
  if (!(sum > 0.0)) throw AnalysisError("visibility undefined: I_max + I_min = 0");
  return {(i_max - i_min) / sum, i_max, i_min};
}

VisibilityReport visibility_from_scan(std::span<const double> intensities) {
  if (intensities.empty()) throw AnalysisError("visibility of an empty scan");
  const auto [lo, hi] = std::minmax_element(intensities.begin(), intensities.end());
  return visibility_from_extrema(*hi, *lo);
}

VisibilityReport visibility_from_trace(const DetectorTrace& trace) {
  return visibility_from_scan(trace.powers);
}

VisibilityReport two_beam_visibility(double p1, double p2) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0)) throw AnalysisError("beam powers must be non-negative");
  const double cross = 2.0 * std::sqrt(p1 * p2);
  return visibility_from_extrema(p1 + p2 + cross, p1 + p2 - cross);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

DiscriminationReport discriminate_models(const DetectorTrace& trace_local,
                                         const DetectorTrace& trace_nonlocal,
                                         double expected_delay, const OnsetOptions& opts) {
  DiscriminationReport r;
  r.detector_id = trace_local.detector_id;
  r.expected_delay = expected_delay;
  if (trace_local.times.size() >= 2) {
    r.tolerance = 2.0 * (trace_local.times[1] - trace_local.times[0]);
  }
  if (auto on = detect_onset(trace_local, opts)) r.onset_local = on->onset_time;
  if (auto on = detect_onset(trace_nonlocal, opts)) r.onset_nonlocal = on->onset_time;
  if (!r.onset_local || !r.onset_nonlocal) {
    r.verdict = Verdict::inconclusive;
    return r;
  }
  r.difference = *r.onset_local - *r.onset_nonlocal;
  r.verdict = std::abs(r.difference - expected_delay) <= r.tolerance ? Verdict::pass : Verdict::fail;
  return r;
}

}  // namespace mzsim
