#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mzsim/engine.hpp"
#include "mzsim/optics.hpp"

namespace mzsim {

enum class OpenSlits { first = 1, second = 2, both = 3 };

std::string_view to_string(OpenSlits open);

/// Two equal 1-D slits centred at -separation/2 (first) and +separation/2 (second).
struct SlitGeometry {
  double separation = 0.6e-3;  // centre to centre, m
  double width = 0.1e-3;       // m
  double wavelength = 633e-9;  // m
  OpenSlits open = OpenSlits::both;

  void validate() const;
  double centre(int slit) const { return slit == 1 ? -0.5 * separation : 0.5 * separation; }

  bool operator==(const SlitGeometry&) const = default;
};

/// Uniform screen grid symmetric about x = 0.
struct ScreenGrid {
  double half_width = 1e-3;
  std::size_t points = 2001;

  bool operator==(const ScreenGrid&) const = default;
};

std::vector<double> screen_coordinates(const ScreenGrid& grid);

/// Half-width wide enough for the central single-slit lobe and both geometric slit images.
ScreenGrid default_grid(const SlitGeometry& geom, double z, std::size_t points = 2001);

struct QuadratureOptions {
  std::size_t min_nodes = 2001;   // per slit, made odd
  std::size_t max_nodes = 131073;
  double tolerance = 1e-3;        // max |dI| on node doubling, relative to the peak

  bool operator==(const QuadratureOptions&) const = default;
};

struct ScreenProfile {
  double z = 0.0;
  std::vector<double> xs;
  std::vector<double> intensity;
  std::size_t nodes_per_slit = 0;
  double convergence = 0.0;  // relative change observed on the last doubling
};

/// Composite Simpson estimate of integral exp(i k r) / sqrt(r) over one slit, with
/// r = sqrt(z^2 + (x - xi)^2), normalised by width / sqrt(z).
std::vector<Amplitude> aperture_amplitude(double centre, double width, double wavelength, double z,
                                          std::span<const double> xs, std::size_t nodes);

/// Intensity |sum over open slits of aperture_amplitude|^2, doubling the node count until the
/// profile changes by less than `quad.tolerance`. Throws DomainError for z <= 0 and
/// AccuracyError when the node budget runs out.
ScreenProfile slit_pattern(const SlitGeometry& geom, double z, const ScreenGrid& grid,
                           const QuadratureOptions& quad = {});

struct Peak {
  double x = 0.0;  // parabolically refined, m
  double intensity = 0.0;
  std::size_t index = 0;
};

/// Interior local maxima above `dominance` times the profile maximum.
std::vector<Peak> find_maxima(const ScreenProfile& profile, double dominance = 0.2);

enum class Regime { near_two_lines, mid_envelope, far_fringes };

std::string_view to_string(Regime r);

struct RegimeThresholds {
  double dominance = 0.2;           // maxima below this fraction of the peak are ignored
  double cluster_gap = 1.0;         // maxima closer than this many slit widths form one line
  double near_tolerance = 0.2;      // separation vs slit separation
  double far_tolerance = 0.1;       // spacing vs lambda z / d
  std::size_t min_fringes = 5;

  bool operator==(const RegimeThresholds&) const = default;
};

struct RegimeReport {
  Regime regime = Regime::mid_envelope;
  std::vector<double> dominant_positions;  // m
  double expected_spacing = 0.0;           // lambda z / d
};

/// Throws AnalysisError for a flat profile.
RegimeReport classify_regime(const ScreenProfile& profile, const SlitGeometry& geom,
                             const RegimeThresholds& thresholds = {});

/// Median spacing between adjacent dominant maxima. Throws AnalysisError("insufficient maxima")
/// with fewer than three.
double fringe_spacing(const ScreenProfile& profile, double dominance = 0.2);

/// Screen view of an aperture change at t_switch. Under local propagation the old pattern
/// persists until t_switch + z/c; under nonlocal it is replaced at t_switch. The front is sharp.
class TransientScreen {
 public:
  TransientScreen(const SlitGeometry& geom, OpenSlits before, OpenSlits after, double z,
                  double t_switch, PropagationModel model, const ScreenGrid& grid,
                  const QuadratureOptions& quad = {});
  /// Reuses patterns already computed for the two aperture states.
  TransientScreen(ScreenProfile before, ScreenProfile after, double z, double t_switch,
                  PropagationModel model);

  double change_time() const { return change_time_; }
  const ScreenProfile& at(double t) const { return t < change_time_ ? before_ : after_; }
  const ScreenProfile& before() const { return before_; }
  const ScreenProfile& after() const { return after_; }

 private:
  double change_time_;
  ScreenProfile before_;
  ScreenProfile after_;
};

/// Time at which the screen at distance z first shows the new aperture state.
double pattern_change_time(double z, double t_switch, PropagationModel model);

/// Pattern on the screen at time t; `geom.open` is the state after the switch.
ScreenProfile transient_transform(const SlitGeometry& geom, OpenSlits before, double z,
                                  double t_switch, double t, PropagationModel model,
                                  const ScreenGrid& grid, const QuadratureOptions& quad = {});

}  // namespace mzsim
