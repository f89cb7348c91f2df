#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mzsim {

using Amplitude = std::complex<double>;

/// Speed of light in vacuum, m/s. Every delay in the library is length / kSpeedOfLight.
inline constexpr double kSpeedOfLight = 2.99792458e8;

inline double power(Amplitude a) { return std::norm(a); }

struct PortPair {
  Amplitude c;
  Amplitude d;
};

/// Lossless symmetric 50/50 splitter, matrix (1, i; i, 1)/sqrt(2).
/// Input a couples straight to output c, input b straight to output d.
/// Throws DomainError on non-finite input.
PortPair beam_splitter_scatter(Amplitude in_a, Amplitude in_b);

/// Transfer factor of a splitter from input port to output port (0 or 1 each).
Amplitude beam_splitter_factor(int in_port, int out_port);

/// Unit-magnitude reflection with phase pi.
inline constexpr Amplitude kMirrorReflection{-1.0, 0.0};

/// Gaussian wave packet emitted by the source.
struct WavePacket {
  double emit_time = 0.0;         // envelope centre at the source, s
  double wavelength = 633e-9;     // carrier, m
  double coherence_length = 50.0; // m
  double peak_amplitude = 1.0;

  /// Temporal width of the envelope: coherence_length / c.
  double sigma_t() const { return coherence_length / kSpeedOfLight; }
  /// Throws DomainError when a field violates its range.
  void validate() const;

  bool operator==(const WavePacket&) const = default;
};

/// Degree of mutual coherence exp(-(delay / sigma_t)^2).
double coherence_factor(double delay, const WavePacket& packet);

/// Same Gaussian form with an explicit coherence time.
double coherence_factor_for_time(double delay, double coherence_time);

/// Envelope amplitude of `packet` observed `arrival_offset` seconds downstream of the source.
double packet_envelope(double t, const WavePacket& packet, double arrival_offset);

struct AomEvent {
  double time = 0.0;  // start of the ramp, s
  bool on = false;    // target state

  bool operator==(const AomEvent&) const = default;
};

/// Zero-order amplitude transmission history of a single AOM.
///
/// The level starts at `initial_level` and, at each event, moves linearly to 1 (on) or 0 (off)
/// over `ramp_duration`. Whatever is not transmitted is diverted into the first-order beam and
/// leaves the network. Events must be time-ordered and separated by at least one ramp.
class AomTimeline {
 public:
  AomTimeline() = default;
  AomTimeline(double initial_level, std::vector<AomEvent> events, double ramp_duration);

  double transmission(double t) const;

  double initial_level() const { return initial_level_; }
  double ramp_duration() const { return ramp_duration_; }
  std::span<const AomEvent> events() const { return events_; }
  bool is_static() const { return events_.empty(); }

 private:
  double initial_level_ = 1.0;
  double ramp_duration_ = 10e-9;
  std::vector<AomEvent> events_;
};

inline double aom_transmission(const AomTimeline& timeline, double t) {
  return timeline.transmission(t);
}

}  // namespace mzsim
