#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mzsim/optics.hpp"

namespace mzsim {

enum class ComponentKind { source, beam_splitter, mirror, aom, delay_line, detector };

std::string_view to_string(ComponentKind kind);

struct ComponentParams {
  double phase = 0.0;            // delay_line: static phase, rad
  double drift_amplitude = 0.0;  // delay_line: thermal drift amplitude, rad
  double drift_period = 1.0;     // delay_line: drift period, s
  std::optional<double> ramp_duration;  // aom: overrides the schedule ramp

  bool operator==(const ComponentParams&) const = default;
};

struct Component {
  std::string id;
  ComponentKind kind = ComponentKind::mirror;
  ComponentParams params;
  std::string label;  // e.g. "power meter 1"

  bool operator==(const Component&) const = default;
};

/// Directed link between an output port and an input port. Splitters use ports 0 and 1,
/// every other kind uses port 0 only.
struct Edge {
  std::string from;
  int from_port = 0;
  std::string to;
  int to_port = 0;
  double length = 0.0;  // m

  bool operator==(const Edge&) const = default;
};

class OpticalNetwork {
 public:
  void add_component(Component component);
  void connect(Edge edge);
  void connect(std::string from, int from_port, std::string to, int to_port, double length);

  const std::vector<Component>& components() const { return components_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Component* find(std::string_view id) const;
  /// Throws LookupError when `id` is absent.
  const Component& at(std::string_view id) const;
  ComponentParams& params(std::string_view id);

  std::vector<std::string> ids_of(ComponentKind kind) const;
  std::vector<std::string> detector_ids() const { return ids_of(ComponentKind::detector); }

  bool operator==(const OpticalNetwork&) const = default;

 private:
  std::vector<Component> components_;
  std::vector<Edge> edges_;
};

struct Violation {
  std::string code;  // "unreachable detector", "nonpositive length", ...
  std::string detail;
};

/// Every structural problem in `net`; empty when the network is valid.
std::vector<Violation> validate(const OpticalNetwork& net);

struct PathHop {
  std::string component;
  ComponentKind kind = ComponentKind::mirror;
  double delay_from_source = 0.0;   // s
  double delay_to_detector = 0.0;   // s
};

/// One simple source-to-detector path.
struct PathRecord {
  std::vector<std::string> components;
  std::vector<PathHop> hops;
  double total_length = 0.0;  // m
  double total_delay = 0.0;   // total_length / c
  Amplitude static_amplitude; // all AOMs on, no drift

  const PathHop* hop(std::string_view id) const;
};

/// All source-to-`detector_id` paths, sorted by component sequence.
/// Throws LookupError for an unknown detector and ConstructionError for an invalid network.
std::vector<PathRecord> enumerate_paths(const OpticalNetwork& net, std::string_view detector_id);

/// Paths from the source to the input of any component. Hop delays are measured to that
/// component; the target itself contributes no factor.
std::vector<PathRecord> enumerate_paths_to(const OpticalNetwork& net, std::string_view component_id);

/// Geometry of the two-arm interferometer.
///
/// `arm_length` is the source-to-detector flight length of each path. Splitters sit one lead
/// (1 mm) from the source and from the detectors; AOM positions are measured from one lead
/// past the first splitter, so position 0 places the AOM directly after it. All coordinates are
/// snapped to a 2^-30 m grid so path sums are exact.
struct MziSpec {
  double arm_length = 15.0;
  double aom1_position = 0.0;
  double aom2_position = 0.0;
  bool balanced = true;
  double imbalance = 0.0;        // extra arm-B length when !balanced, m
  double arm_phase = 0.0;        // static phase on arm B, rad
  double drift_amplitude = 0.0;  // fiber thermal drift on arm B, rad
  double drift_period = 1.0;     // s
  bool fiber = false;            // couplers and fibre, no mirrors

  bool operator==(const MziSpec&) const = default;
};

inline constexpr double kMziLead = 1e-3;

/// Ids used by build_mzi.
namespace mzi_ids {
inline constexpr std::string_view source = "source";
inline constexpr std::string_view aom1 = "aom1";
inline constexpr std::string_view aom2 = "aom2";
inline constexpr std::string_view arm_b_phase = "phase_b";
inline constexpr std::string_view det1 = "det1";
inline constexpr std::string_view det2 = "det2";
}  // namespace mzi_ids

/// Source -> BS1 -> {arm A with AOM1, arm B with AOM2} -> BS2 -> {det1, det2}.
/// det1 is the bright port of the balanced interferometer. Throws ConstructionError on bad geometry.
OpticalNetwork build_mzi(const MziSpec& spec);

/// Rounds a length to the 2^-30 m geometry grid.
double snap_length(double metres);

}  // namespace mzsim
