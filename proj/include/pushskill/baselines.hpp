#pragma once

// Comparison strategies. The spiral search drags the still-grasped object
// along an Archimedean spiral under constant press until it drops into the
// pocket. The remaining generators cover the classic planar search patterns.

#include "pushskill/contact_model.hpp"
#include "pushskill/controller.hpp"
#include "pushskill/rig.hpp"
#include "pushskill/skill.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace pushskill {

using Path = std::vector<Vec2>;

struct SpiralParams {
  double max_radius = 10.0;  // mm
  double pitch = 1.0;        // mm per revolution
  double step_len = 0.1;     // mm between waypoints
  double f_z = 5.0;          // N

  void validate(double max_substep = kMaxSubstep) const {
    if (!(max_radius > 0.0)) throw std::invalid_argument("SpiralParams: max_radius must be positive");
    if (!(pitch > 0.0 && pitch < max_radius)) throw std::invalid_argument("SpiralParams: need 0 < pitch < max_radius");
    if (!(step_len > 0.0 && step_len <= max_substep + 1e-12))
      throw std::invalid_argument("SpiralParams: need 0 < step_len <= max substep");
    if (!(f_z > 0.0)) throw std::invalid_argument("SpiralParams: f_z must be positive");
  }
};

/// Archimedean spiral r = pitch * phi / 2pi around the origin, spaced by arc
/// length and ending exactly on r = max_radius.
inline Path spiral_path(const SpiralParams& p) {
  p.validate();
  const double b = p.pitch / (2.0 * std::numbers::pi);
  const double phi_end = p.max_radius / b;
  auto at = [&](double phi) { return Vec2(b * phi * std::cos(phi), b * phi * std::sin(phi)); };

  Path out{Vec2::Zero()};
  double phi = 0.0;
  const int sub = 16;
  while (true) {
    // Integrate ds = sqrt(r^2 + b^2) dphi in small pieces up to one step_len.
    double s = 0.0;
    double next = phi;
    while (s < p.step_len && next < phi_end) {
      const double r = b * next;
      const double dphi = (p.step_len / sub) / std::hypot(r, b);
      next += dphi;
      s += p.step_len / sub;
    }
    if (next >= phi_end) {
      const Vec2 end = at(phi_end);
      if (out.size() > 1 && (end - out.back()).norm() < 0.5 * p.step_len) out.back() = end;
      else out.push_back(end);
      break;
    }
    out.push_back(at(next));
    phi = next;
  }
  return out;
}

struct LinearTrajectory {
  double length = 5.0;   // mm
  double heading = 0.0;  // rad
};

struct ZigzagTrajectory {
  double amplitude = 3.0;  // mm
  double period = 4.0;     // mm along x per full cycle
  int periods = 4;
  double step_len = 0.1;
};

struct SinusTrajectory {
  double amplitude = 2.0;   // mm
  double wavelength = 5.0;  // mm
  double length = 20.0;     // mm along x
  double step_len = 0.1;
};

struct LissajousTrajectory {
  double amp_x = 3.0;  // mm
  double amp_y = 3.0;  // mm
  double freq_x = 1.0;
  double freq_y = 2.0;
  double phase = std::numbers::pi / 2;
  int samples = 400;
};

using TrajectoryKind = std::variant<LinearTrajectory, ZigzagTrajectory, SpiralParams, SinusTrajectory, LissajousTrajectory>;

namespace detail {

// Densifies a polyline so no segment exceeds step_len, keeping the corners.
inline Path densify(const Path& corners, double step_len) {
  Path out{corners.front()};
  for (std::size_t i = 1; i < corners.size(); ++i) {
    const Vec2 a = corners[i - 1];
    const Vec2 b = corners[i];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / step_len - 1e-9)));
    for (int k = 1; k <= n; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  return out;
}

}  // namespace detail

inline Path generate_trajectory(const TrajectoryKind& kind) {
  struct Visitor {
    Path operator()(const LinearTrajectory& t) const {
      if (!(t.length > 0.0)) throw std::invalid_argument("linear: length must be positive");
      return {Vec2::Zero(), t.length * Vec2(std::cos(t.heading), std::sin(t.heading))};
    }
    Path operator()(const ZigzagTrajectory& t) const {
      if (!(t.amplitude > 0.0 && t.period > 0.0 && t.periods > 0 && t.step_len > 0.0))
        throw std::invalid_argument("zigzag: parameters must be positive");
      Path corners{Vec2::Zero()};
      const double q = t.period / 4.0;
      for (int k = 0; k < t.periods; ++k) {
        const double x0 = k * t.period;
        corners.emplace_back(x0 + q, t.amplitude);
        corners.emplace_back(x0 + 3 * q, -t.amplitude);
      }
      corners.emplace_back(t.periods * t.period, 0.0);
      return detail::densify(corners, t.step_len);
    }
    Path operator()(const SpiralParams& p) const { return spiral_path(p); }
    Path operator()(const SinusTrajectory& t) const {
      if (!(t.amplitude > 0.0 && t.wavelength > 0.0 && t.length > 0.0 && t.step_len > 0.0))
        throw std::invalid_argument("sinus: parameters must be positive");
      // Sample densely enough that chords stay under step_len.
      const double slope = 2.0 * std::numbers::pi * t.amplitude / t.wavelength;
      const int n = static_cast<int>(std::ceil(t.length * std::hypot(1.0, slope) / t.step_len));
      Path out;
      for (int i = 0; i <= n; ++i) {
        const double x = t.length * i / n;
        out.emplace_back(x, t.amplitude * std::sin(2.0 * std::numbers::pi * x / t.wavelength));
      }
      return out;
    }
    Path operator()(const LissajousTrajectory& t) const {
      if (!(t.amp_x > 0.0 && t.amp_y > 0.0 && t.samples > 1)) throw std::invalid_argument("lissajous: bad parameters");
      Path out;
      for (int i = 0; i <= t.samples; ++i) {
        const double s = 2.0 * std::numbers::pi * i / t.samples;
        out.emplace_back(t.amp_x * std::sin(t.freq_x * s), t.amp_y * std::sin(t.freq_y * s + t.phase));
      }
      return out;
    }
  };
  return std::visit(Visitor{}, kind);
}

/// Drags the grasped object along the spiral until it is inside the pocket,
/// the path runs out, or the safety bound trips.
inline SkillOutcome execute_spiral(const Scene& scene, const Pose& object_start, const ControllerConfig& ctl,
                                   const SpiralParams& p, double success_tol = 0.2, double safety_force = 50.0) {
  p.validate(ctl.gains.max_substep);
  SkillOutcome out;
  PressRig rig(scene, ctl, object_start, /*grasped=*/true, safety_force);

  auto inserted = [&] { return !rig.object().stuck && inspect(scene, rig.object().pose, success_tol).success; };

  if (!rig.settle_press(p.f_z)) {
    out.failure = rig.aborted() ? "safety_abort" : "press_not_settled";
  } else if (!inserted()) {
    const Vec2 center = object_start.position();
    const Path path = spiral_path(p);
    bool done = false;
    for (std::size_t i = 1; i < path.size() && !done; ++i) {
      if (!rig.step(center + path[i], p.f_z)) break;
      done = inserted();
    }
    if (!done && !rig.aborted()) out.failure = "path_exhausted";
  }
  out.actions_executed = 1;
  detail::finish(out, rig, scene, success_tol);
  if (out.stuck) out.success = false;
  if (out.success) out.failure.clear();
  else if (out.stuck) out.failure = "stuck_on_fixture";
  return out;
}

/// Learned search policy: maps the measured wrench to a force command.
class SearchPolicy {
 public:
  virtual ~SearchPolicy() = default;
  virtual Wrench act(const Wrench& state) = 0;
};

}  // namespace pushskill
