#include "mzsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "mzsim/errors.hpp"

namespace mzsim {

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::source: return "source";
    case ComponentKind::beam_splitter: return "beam_splitter";
    case ComponentKind::mirror: return "mirror";
    case ComponentKind::aom: return "aom";
    case ComponentKind::delay_line: return "delay_line";
    case ComponentKind::detector: return "detector";
  }
  return "unknown";
}

void OpticalNetwork::add_component(Component component) {
  components_.push_back(std::move(component));
}

void OpticalNetwork::connect(Edge edge) { edges_.push_back(std::move(edge)); }

void OpticalNetwork::connect(std::string from, int from_port, std::string to, int to_port,
                             double length) {
  edges_.push_back(Edge{std::move(from), from_port, std::move(to), to_port, length});
}

const Component* OpticalNetwork::find(std::string_view id) const {
  auto it = std::find_if(components_.begin(), components_.end(),
                         [&](const Component& c) { return c.id == id; });
  return it == components_.end() ? nullptr : &*it;
}

const Component& OpticalNetwork::at(std::string_view id) const {
  const Component* c = find(id);
  if (c == nullptr) {
    throw LookupError("unknown component '" + std::string(id) + "'");
  }
  return *c;
}

ComponentParams& OpticalNetwork::params(std::string_view id) {
  auto it = std::find_if(components_.begin(), components_.end(),
                         [&](const Component& c) { return c.id == id; });
  if (it == components_.end()) {
    throw LookupError("unknown component '" + std::string(id) + "'");
  }
  return it->params;
}

std::vector<std::string> OpticalNetwork::ids_of(ComponentKind kind) const {
  std::vector<std::string> out;
  for (const auto& c : components_) {
    if (c.kind == kind) out.push_back(c.id);
  }
  return out;
}

namespace {

int port_count(ComponentKind kind) { return kind == ComponentKind::beam_splitter ? 2 : 1; }

bool has_inputs(ComponentKind kind) { return kind != ComponentKind::source; }
bool has_outputs(ComponentKind kind) { return kind != ComponentKind::detector; }

}  // namespace

std::vector<Violation> validate(const OpticalNetwork& net) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };

  std::map<std::string, ComponentKind, std::less<>> kinds;
  for (const auto& c : net.components()) {
    if (!kinds.emplace(c.id, c.kind).second) add("duplicate id", c.id);
  }

  const auto sources = net.ids_of(ComponentKind::source);
  if (sources.size() != 1) {
    add("source count", "expected exactly one source, found " + std::to_string(sources.size()));
  }

  std::set<std::pair<std::string, int>> used_out;
  std::set<std::pair<std::string, int>> used_in;
  std::map<std::string, std::vector<std::string>, std::less<>> adjacency;
  for (const auto& e : net.edges()) {
    const std::string name = e.from + " -> " + e.to;
    if (!(e.length > 0.0) || !std::isfinite(e.length)) add("nonpositive length", name);

    auto from = kinds.find(e.from);
    auto to = kinds.find(e.to);
    if (from == kinds.end()) add("unknown component", e.from);
    if (to == kinds.end()) add("unknown component", e.to);
    if (from == kinds.end() || to == kinds.end()) continue;

    if (!has_outputs(from->second)) add("detector has output", e.from);
    if (!has_inputs(to->second)) add("source has input", e.to);
    if (e.from_port < 0 || e.from_port >= port_count(from->second)) {
      add("invalid port", name + " (output " + std::to_string(e.from_port) + ")");
    }
    if (e.to_port < 0 || e.to_port >= port_count(to->second)) {
      add("invalid port", name + " (input " + std::to_string(e.to_port) + ")");
    }
    if (!used_out.emplace(e.from, e.from_port).second) {
      add("port arity", e.from + " output " + std::to_string(e.from_port) + " used twice");
    }
    if (!used_in.emplace(e.to, e.to_port).second) {
      add("port arity", e.to + " input " + std::to_string(e.to_port) + " used twice");
    }
    adjacency[e.from].push_back(e.to);
  }

  // Cycle detection: 0 unvisited, 1 on stack, 2 done.
  std::map<std::string, int, std::less<>> colour;
  bool cyclic = false;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    colour[id] = 1;
    for (const auto& next : adjacency[id]) {
      const int c = colour[next];
      if (c == 1) {
        cyclic = true;
      } else if (c == 0) {
        visit(next);
      }
    }
    colour[id] = 2;
  };
  for (const auto& c : net.components()) {
    if (colour[c.id] == 0) visit(c.id);
  }
  if (cyclic) add("cycle", "network contains a directed cycle");

  std::set<std::string, std::less<>> reached;
  std::vector<std::string> stack(sources.begin(), sources.end());
  while (!stack.empty()) {
    std::string id = std::move(stack.back());
    stack.pop_back();
    if (!reached.insert(id).second) continue;
    for (const auto& next : adjacency[id]) stack.push_back(next);
  }
  for (const auto& det : net.detector_ids()) {
    if (!reached.contains(det)) add("unreachable detector", det);
  }
  return out;
}

const PathHop* PathRecord::hop(std::string_view id) const {
  for (const auto& h : hops) {
    if (h.component == id) return &h;
  }
  return nullptr;
}

namespace {

Amplitude transfer_factor(const Component& c, int in_port, int out_port) {
  switch (c.kind) {
    case ComponentKind::beam_splitter: return beam_splitter_factor(in_port, out_port);
    case ComponentKind::mirror: return kMirrorReflection;
    case ComponentKind::delay_line: return std::polar(1.0, c.params.phase);
    case ComponentKind::source:
    case ComponentKind::aom:
    case ComponentKind::detector: return {1.0, 0.0};
  }
  return {1.0, 0.0};
}

std::string describe(const std::vector<Violation>& violations) {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v.code + ": " + v.detail;
  }
  return s;
}

}  // namespace

std::vector<PathRecord> enumerate_paths(const OpticalNetwork& net, std::string_view detector_id) {
  const Component* target = net.find(detector_id);
  if (target == nullptr || target->kind != ComponentKind::detector) {
    throw LookupError("unknown detector '" + std::string(detector_id) + "'");
  }
  return enumerate_paths_to(net, detector_id);
}

std::vector<PathRecord> enumerate_paths_to(const OpticalNetwork& net, std::string_view target_id) {
  net.at(target_id);
  if (auto violations = validate(net); !violations.empty()) {
    throw ConstructionError("invalid network: " + describe(violations));
  }

  std::map<std::string, std::vector<const Edge*>, std::less<>> outgoing;
  for (const auto& e : net.edges()) outgoing[e.from].push_back(&e);

  struct Frame {
    std::string id;
    int in_port;
    double distance;
  };
  std::vector<Frame> trail;
  std::vector<Amplitude> factors;
  std::vector<PathRecord> paths;

  std::function<void(const std::string&, int, double)> walk = [&](const std::string& id,
                                                                   int in_port, double distance) {
    const Component& c = net.at(id);
    trail.push_back({id, in_port, distance});
    if (c.id == target_id || c.kind == ComponentKind::detector) {
      if (c.id == target_id) {
        PathRecord rec;
        rec.total_length = distance;
        rec.total_delay = distance / kSpeedOfLight;
        Amplitude amp{1.0, 0.0};
        for (const auto& f : factors) amp *= f;
        rec.static_amplitude = amp;
        for (const auto& fr : trail) {
          rec.components.push_back(fr.id);
          rec.hops.push_back({fr.id, net.at(fr.id).kind, fr.distance / kSpeedOfLight,
                              (distance - fr.distance) / kSpeedOfLight});
        }
        paths.push_back(std::move(rec));
      }
    } else if (auto it = outgoing.find(id); it != outgoing.end()) {
      for (const Edge* e : it->second) {
        factors.push_back(transfer_factor(c, in_port, e->from_port));
        walk(e->to, e->to_port, distance + e->length);
        factors.pop_back();
      }
    }
    trail.pop_back();
  };

  walk(net.ids_of(ComponentKind::source).front(), 0, 0.0);
  std::sort(paths.begin(), paths.end(),
            [](const PathRecord& a, const PathRecord& b) { return a.components < b.components; });
  return paths;
}

double snap_length(double metres) {
  constexpr double kGrid = 1073741824.0;  // 2^30
  return std::round(metres * kGrid) / kGrid;
}

namespace {

struct ArmElement {
  double coordinate;  // from the first splitter, m
  Component component;
};

void lay_arm(OpticalNetwork& net, const std::string& splitter_in, int out_port,
             const std::string& splitter_out, int in_port, double arm_length,
             std::vector<ArmElement> elements) {
  std::sort(elements.begin(), elements.end(),
            [](const ArmElement& a, const ArmElement& b) { return a.coordinate < b.coordinate; });
  std::string prev = splitter_in;
  int prev_port = out_port;
  double prev_coord = 0.0;
  for (auto& el : elements) {
    const double gap = el.coordinate - prev_coord;
    if (!(gap > 0.0)) {
      throw ConstructionError("components '" + prev + "' and '" + el.component.id +
                              "' coincide or are out of order");
    }
    net.connect(prev, prev_port, el.component.id, 0, gap);
    prev = el.component.id;
    prev_port = 0;
    prev_coord = el.coordinate;
    net.add_component(std::move(el.component));
  }
  const double tail = arm_length - prev_coord;
  if (!(tail > 0.0)) {
    throw ConstructionError("component '" + prev + "' lies beyond the end of its arm");
  }
  net.connect(prev, prev_port, splitter_out, in_port, tail);
}

}  // namespace

OpticalNetwork build_mzi(const MziSpec& spec) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(spec.arm_length) || !finite(spec.aom1_position) || !finite(spec.aom2_position) ||
      !finite(spec.imbalance) || !finite(spec.arm_phase) || !finite(spec.drift_amplitude) ||
      !finite(spec.drift_period)) {
    throw ConstructionError("interferometer geometry must be finite");
  }
  if (spec.arm_length <= 6.0 * kMziLead) {
    throw ConstructionError("arm length must exceed six lead lengths (6 mm)");
  }
  if (spec.aom1_position < 0.0 || spec.aom2_position < 0.0) {
    throw ConstructionError("AOM position must be non-negative");
  }
  if (!spec.balanced && !(spec.imbalance > 0.0)) {
    throw ConstructionError("unbalanced interferometer needs a positive imbalance");
  }
  if (!(spec.drift_period > 0.0)) {
    throw ConstructionError("drift period must be positive");
  }

  const double lead = snap_length(kMziLead);
  const double arm_a = snap_length(spec.arm_length) - 2.0 * lead;
  const double arm_b = spec.balanced ? arm_a : arm_a + snap_length(spec.imbalance);
  const double aom1_at = lead + snap_length(spec.aom1_position);
  const double aom2_at = lead + snap_length(spec.aom2_position);
  if (aom1_at >= arm_a - lead || aom2_at >= arm_b - 2.0 * lead) {
    throw ConstructionError("AOM position lies outside its arm");
  }

  const std::string splitter1 = spec.fiber ? "coupler1" : "bs1";
  const std::string splitter2 = spec.fiber ? "coupler2" : "bs2";

  OpticalNetwork net;
  net.add_component({std::string(mzi_ids::source), ComponentKind::source, {}, "laser"});
  net.add_component({splitter1, ComponentKind::beam_splitter, {}, "beam splitter 1"});
  net.add_component({splitter2, ComponentKind::beam_splitter, {}, "beam splitter 2"});
  net.add_component({std::string(mzi_ids::det1), ComponentKind::detector, {}, "power meter 1"});
  net.add_component({std::string(mzi_ids::det2), ComponentKind::detector, {}, "power meter 2"});

  net.connect(std::string(mzi_ids::source), 0, splitter1, 0, lead);

  std::vector<ArmElement> path_a;
  path_a.push_back({aom1_at, {std::string(mzi_ids::aom1), ComponentKind::aom, {}, "AOM 1"}});
  std::vector<ArmElement> path_b;
  path_b.push_back({aom2_at, {std::string(mzi_ids::aom2), ComponentKind::aom, {}, "AOM 2"}});
  ComponentParams phase_params;
  phase_params.phase = spec.arm_phase;
  phase_params.drift_amplitude = spec.drift_amplitude;
  phase_params.drift_period = spec.drift_period;
  path_b.push_back({arm_b - lead,
                    {std::string(mzi_ids::arm_b_phase), ComponentKind::delay_line, phase_params,
                     "arm B phase"}});
  if (!spec.fiber) {
    path_a.push_back({snap_length(arm_a / 2.0),
                      {"mirror_a", ComponentKind::mirror, {}, "mirror A"}});
    path_b.push_back({snap_length(arm_b / 2.0),
                      {"mirror_b", ComponentKind::mirror, {}, "mirror B"}});
  }

  // Arm A leaves BS1 straight (port 0) and crosses at BS2; arm B the reverse. det1 collects the
  // crossed-straight pair and is the bright port.
  lay_arm(net, splitter1, 0, splitter2, 0, arm_a, std::move(path_a));
  lay_arm(net, splitter1, 1, splitter2, 1, arm_b, std::move(path_b));

  net.connect(splitter2, 0, std::string(mzi_ids::det2), 0, lead);
  net.connect(splitter2, 1, std::string(mzi_ids::det1), 0, lead);
  return net;
}

}  // namespace mzsim
