#pragma once

#include <optional>
#include <span>
#include <string>

#include "mzsim/engine.hpp"

namespace mzsim {

struct OnsetOptions {
  double threshold = 0.01;  // fraction of the full-range change
  /// Baseline averaging window in seconds; unset means 20 samples.
  std::optional<double> baseline_window;
};

struct OnsetReport {
  std::string detector_id;
  double onset_time = 0.0;
  double settle_time = 0.0;
  double threshold_used = 0.0;
};

/// First sample departing the baseline mean by more than threshold * full-range change, and the
/// first later sample after which the trace stays within that band of its final value.
/// Returns nullopt for a trace that never departs. Throws AnalysisError for fewer than 3 samples.
std::optional<OnsetReport> detect_onset(const DetectorTrace& trace, const OnsetOptions& opts = {});

struct VisibilityReport {
  double visibility = 0.0;
  double i_max = 0.0;
  double i_min = 0.0;
};

/// (I_max - I_min) / (I_max + I_min); throws AnalysisError when the denominator vanishes.
VisibilityReport visibility_from_extrema(double i_max, double i_min);

/// Visibility of a phase scan covering at least one fringe period.
VisibilityReport visibility_from_scan(std::span<const double> intensities);

/// Max and min over a detector trace.
VisibilityReport visibility_from_trace(const DetectorTrace& trace);

/// Fringe visibility of two mutually coherent beams with the given powers: 2 sqrt(p1 p2)/(p1 + p2).
VisibilityReport two_beam_visibility(double p1, double p2);

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict v);

struct DiscriminationReport {
  std::string detector_id;
  std::optional<double> onset_local;
  std::optional<double> onset_nonlocal;
  double difference = 0.0;  // onset_local - onset_nonlocal
  double expected_delay = 0.0;
  double tolerance = 0.0;   // 2 dt
  Verdict verdict = Verdict::inconclusive;
};

/// Compares onsets of two traces that differ only in propagation model.
DiscriminationReport discriminate_models(const DetectorTrace& trace_local,
                                         const DetectorTrace& trace_nonlocal,
                                         double expected_delay, const OnsetOptions& opts = {});

}  // namespace mzsim
