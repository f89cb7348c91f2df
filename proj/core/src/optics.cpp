#include "mzsim/optics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mzsim/errors.hpp"

namespace mzsim {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

bool finite(Amplitude a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

}  // namespace

PortPair beam_splitter_scatter(Amplitude in_a, Amplitude in_b) {
  if (!finite(in_a) || !finite(in_b)) {
    throw DomainError("beam splitter input is not finite");
  }
  const Amplitude i{0.0, 1.0};
  return {(in_a + i * in_b) * kInvSqrt2, (i * in_a + in_b) * kInvSqrt2};
}

Amplitude beam_splitter_factor(int in_port, int out_port) {
  if (in_port < 0 || in_port > 1 || out_port < 0 || out_port > 1) {
    throw DomainError("beam splitter port index must be 0 or 1");
  }
  return in_port == out_port ? Amplitude{kInvSqrt2, 0.0} : Amplitude{0.0, kInvSqrt2};
}

void WavePacket::validate() const {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wave packet wavelength must be positive");
  }
  if (!(coherence_length > 0.0) || !std::isfinite(coherence_length)) {
    throw DomainError("wave packet coherence length must be positive");
  }
  if (!(peak_amplitude >= 0.0) || !std::isfinite(peak_amplitude)) {
    throw DomainError("wave packet peak amplitude must be non-negative");
  }
  if (!std::isfinite(emit_time)) {
    throw DomainError("wave packet emission time must be finite");
  }
}

double coherence_factor_for_time(double delay, double coherence_time) {
  const double u = delay / coherence_time;
  return std::exp(-u * u);
}

double coherence_factor(double delay, const WavePacket& packet) {
  return coherence_factor_for_time(delay, packet.sigma_t());
}

double packet_envelope(double t, const WavePacket& packet, double arrival_offset) {
  const double sigma = packet.sigma_t();
  const double u = t - packet.emit_time - arrival_offset;
  return packet.peak_amplitude * std::exp(-(u * u) / (2.0 * sigma * sigma));
}

AomTimeline::AomTimeline(double initial_level, std::vector<AomEvent> events, double ramp_duration)
    : initial_level_(initial_level), ramp_duration_(ramp_duration), events_(std::move(events)) {
  if (!(initial_level_ >= 0.0 && initial_level_ <= 1.0)) {
    throw ScheduleError("AOM initial transmission must lie in [0, 1]");
  }
  if (!(ramp_duration_ > 0.0) || !std::isfinite(ramp_duration_)) {
    throw ScheduleError("AOM ramp duration must be positive");
  }
  for (std::size_t k = 0; k < events_.size(); ++k) {
    if (!std::isfinite(events_[k].time)) {
      throw ScheduleError("AOM event time must be finite");
    }
    if (k > 0) {
      const double gap = events_[k].time - events_[k - 1].time;
      if (gap < 0.0) {
        throw ScheduleError("AOM events are not time-ordered");
      }
      if (gap < ramp_duration_) {
        throw ScheduleError("AOM events closer than the ramp duration overlap");
      }
    }
  }
}

double AomTimeline::transmission(double t) const {
  if (!std::isfinite(t)) {
    throw DomainError("AOM query time must be finite");
  }
  double level = initial_level_;
  for (const auto& e : events_) {
    if (t <= e.time) {
      return level;
    }
    const double target = e.on ? 1.0 : 0.0;
    if (t < e.time + ramp_duration_) {
      return level + (target - level) * ((t - e.time) / ramp_duration_);
    }
    level = target;
  }
  return level;
}

}  // namespace mzsim
