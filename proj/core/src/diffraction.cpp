#include "mzsim/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "mzsim/errors.hpp"

namespace mzsim {

std::string_view to_string(OpenSlits open) {
  switch (open) {
    case OpenSlits::first: return "first";
    case OpenSlits::second: return "second";
    case OpenSlits::both: return "both";
  }
  return "both";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::near_two_lines: return "near_two_lines";
    case Regime::mid_envelope: return "mid_envelope";
    case Regime::far_fringes: return "far_fringes";
  }
  return "mid_envelope";
}

void SlitGeometry::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("slit width must be positive");
  if (!(separation > width) || !std::isfinite(separation)) {
    throw DomainError("slit separation must exceed the slit width");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be positive");
  }
}

std::vector<double> screen_coordinates(const ScreenGrid& grid) {
  if (grid.points < 3) throw DomainError("screen grid needs at least 3 points");
  if (!(grid.half_width > 0.0) || !std::isfinite(grid.half_width)) {
    throw DomainError("screen half-width must be positive");
  }
  std::vector<double> xs(grid.points);
  const double step = 2.0 * grid.half_width / static_cast<double>(grid.points - 1);
  const double mid = 0.5 * static_cast<double>(grid.points - 1);
  // Built from the centre so that xs[n-1-i] == -xs[i] exactly.
  for (std::size_t i = 0; i < grid.points; ++i) {
    xs[i] = (static_cast<double>(i) - mid) * step;
  }
  return xs;
}

ScreenGrid default_grid(const SlitGeometry& geom, double z, std::size_t points) {
  const double envelope = 0.8 * geom.wavelength * z / geom.width;
  return {std::max(1.5 * geom.separation, envelope), points};
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (workers == 1 || n < 256) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

std::vector<double> intensity_of(const SlitGeometry& geom, double z, std::span<const double> xs,
                                 std::size_t nodes) {
  std::vector<double> out(xs.size());
  auto amp = [&](int slit) {
    return aperture_amplitude(geom.centre(slit), geom.width, geom.wavelength, z, xs, nodes);
  };
  switch (geom.open) {
    case OpenSlits::first: {
      const auto u = amp(1);
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::norm(u[i]);
      break;
    }
    case OpenSlits::second: {
      const auto u = amp(2);
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::norm(u[i]);
      break;
    }
    case OpenSlits::both: {
      const auto u1 = amp(1);
      const auto u2 = amp(2);
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::norm(u1[i] + u2[i]);
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<Amplitude> aperture_amplitude(double centre, double width, double wavelength, double z,
                                          std::span<const double> xs, std::size_t nodes) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("slit-to-screen distance must be positive");
  if (nodes < 3 || nodes % 2 == 0) throw DomainError("Simpson rule needs an odd node count >= 3");

  const double k = 2.0 * std::numbers::pi / wavelength;
  const double h = width / static_cast<double>(nodes - 1);
  const double lo = centre - 0.5 * width;
  std::vector<double> xi(nodes);
  std::vector<double> weight(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    xi[j] = lo + static_cast<double>(j) * h;
    weight[j] = (j == 0 || j == nodes - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
  }
  const double scale = h / 3.0 / (width / std::sqrt(z));
  const double z2 = z * z;

  std::vector<Amplitude> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double dx = xs[i] - xi[j];
      const double r = std::sqrt(z2 + dx * dx);
      // Phase relative to k z keeps full precision at large z; the common factor drops out.
      const double phase = k * (dx * dx / (r + z));
      const double a = weight[j] / std::sqrt(r);
      re += a * std::cos(phase);
      im += a * std::sin(phase);
    }
    out[i] = Amplitude{re, im} * scale;
  });
  return out;
}

ScreenProfile slit_pattern(const SlitGeometry& geom, double z, const ScreenGrid& grid,
                           const QuadratureOptions& quad) {
  geom.validate();
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("slit-to-screen distance must be positive");
  const auto xs = screen_coordinates(grid);

  std::size_t nodes = std::max<std::size_t>(quad.min_nodes, 3) | 1U;
  auto coarse = intensity_of(geom, z, xs, nodes);
  for (;;) {
    const std::size_t finer = 2 * nodes - 1;
    if (finer > quad.max_nodes) {
      throw AccuracyError("slit quadrature did not converge within " +
                          std::to_string(quad.max_nodes) + " nodes");
    }
    auto fine = intensity_of(geom, z, xs, finer);
    const double peak = *std::max_element(fine.begin(), fine.end());
    double change = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      change = std::max(change, std::abs(fine[i] - coarse[i]));
    }
    change = peak > 0.0 ? change / peak : change;
    if (change <= quad.tolerance) {
      return ScreenProfile{z, xs, std::move(fine), finer, change};
    }
    nodes = finer;
    coarse = std::move(fine);
  }
}

std::vector<Peak> find_maxima(const ScreenProfile& profile, double dominance) {
  const auto& in = profile.intensity;
  std::vector<Peak> peaks;
  if (in.size() < 3) return peaks;
  const double top = *std::max_element(in.begin(), in.end());
  const double step = profile.xs[1] - profile.xs[0];
  for (std::size_t i = 1; i + 1 < in.size(); ++i) {
    if (!(in[i] >= in[i - 1] && in[i] > in[i + 1] && in[i] > dominance * top)) continue;
    const double curvature = in[i - 1] - 2.0 * in[i] + in[i + 1];
    double offset = 0.0;
    if (curvature < 0.0) offset = 0.5 * (in[i - 1] - in[i + 1]) / curvature;
    peaks.push_back({profile.xs[i] + offset * step, in[i], i});
  }
  return peaks;
}

RegimeReport classify_regime(const ScreenProfile& profile, const SlitGeometry& geom,
                             const RegimeThresholds& thresholds) {
  const auto& in = profile.intensity;
  if (in.size() < 3) throw AnalysisError("profile too short to classify");
  const auto [lo, hi] = std::minmax_element(in.begin(), in.end());
  if (!(*hi > 0.0) || (*hi - *lo) <= 1e-9 * *hi) {
    throw AnalysisError("degenerate flat profile");
  }

  RegimeReport report;
  report.expected_spacing = geom.wavelength * profile.z / geom.separation;

  // Neighbouring maxima closer than the gap belong to one bright line (near-field ripple).
  const double gap = thresholds.cluster_gap * geom.width;
  double weighted = 0.0;
  double weight = 0.0;
  double last_x = 0.0;
  bool open = false;
  for (const auto& p : find_maxima(profile, thresholds.dominance)) {
    if (open && p.x - last_x >= gap) {
      report.dominant_positions.push_back(weighted / weight);
      weighted = weight = 0.0;
    }
    weighted += p.x * p.intensity;
    weight += p.intensity;
    last_x = p.x;
    open = true;
  }
  if (open) report.dominant_positions.push_back(weighted / weight);

  const auto& pos = report.dominant_positions;
  if (pos.size() == 2 &&
      std::abs((pos[1] - pos[0]) - geom.separation) <= thresholds.near_tolerance * geom.separation) {
    report.regime = Regime::near_two_lines;
    return report;
  }
  if (pos.size() >= thresholds.min_fringes) {
    bool uniform = true;
    for (std::size_t i = 1; i < pos.size(); ++i) {
      const double spacing = pos[i] - pos[i - 1];
      if (std::abs(spacing - report.expected_spacing) >
          thresholds.far_tolerance * report.expected_spacing) {
        uniform = false;
      }
    }
    if (uniform) {
      report.regime = Regime::far_fringes;
      return report;
    }
  }
  report.regime = Regime::mid_envelope;
  return report;
}

double fringe_spacing(const ScreenProfile& profile, double dominance) {
  const auto peaks = find_maxima(profile, dominance);
  if (peaks.size() < 3) throw AnalysisError("insufficient maxima");
  std::vector<double> spacings;
  for (std::size_t i = 1; i < peaks.size(); ++i) spacings.push_back(peaks[i].x - peaks[i - 1].x);
  std::sort(spacings.begin(), spacings.end());
  const std::size_t m = spacings.size();
  return m % 2 == 1 ? spacings[m / 2] : 0.5 * (spacings[m / 2 - 1] + spacings[m / 2]);
}

double pattern_change_time(double z, double t_switch, PropagationModel model) {
  return model == PropagationModel::local ? t_switch + z / kSpeedOfLight : t_switch;
}

TransientScreen::TransientScreen(const SlitGeometry& geom, OpenSlits before, OpenSlits after,
                                 double z, double t_switch, PropagationModel model,
                                 const ScreenGrid& grid, const QuadratureOptions& quad)
    : change_time_(pattern_change_time(z, t_switch, model)) {
  SlitGeometry g = geom;
  g.open = before;
  before_ = slit_pattern(g, z, grid, quad);
  g.open = after;
  after_ = slit_pattern(g, z, grid, quad);
}

TransientScreen::TransientScreen(ScreenProfile before, ScreenProfile after, double z,
                                 double t_switch, PropagationModel model)
    : change_time_(pattern_change_time(z, t_switch, model)),
      before_(std::move(before)),
      after_(std::move(after)) {}

ScreenProfile transient_transform(const SlitGeometry& geom, OpenSlits before, double z,
                                  double t_switch, double t, PropagationModel model,
                                  const ScreenGrid& grid, const QuadratureOptions& quad) {
  SlitGeometry g = geom;
  if (t < pattern_change_time(z, t_switch, model)) g.open = before;
  return slit_pattern(g, z, grid, quad);
}

}  // namespace mzsim
