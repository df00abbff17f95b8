#pragma once

// Pushing-based hybrid position/force assembly skill. The object has been
// released; the gripper keeps pressing on it and sweeps it back and forth in
// x then y so the fixtures stop it and funnel it into the pocket.

#include "pushskill/contact_model.hpp"
#include "pushskill/controller.hpp"
#include "pushskill/rig.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushskill {

struct SkillParams {
  double p_sigma_x = 8.0;      // mm
  double p_sigma_y = 8.0;      // mm
  double f_z = 5.0;            // N
  double success_tol = 0.2;    // mm
  double safety_force = 50.0;  // N

  void validate() const {
    if (!(p_sigma_x > 0.0 && p_sigma_y > 0.0)) throw std::invalid_argument("SkillParams: push amplitudes must be positive");
    if (!(f_z > 0.0)) throw std::invalid_argument("SkillParams: f_z must be positive");
    if (!(success_tol > 0.0)) throw std::invalid_argument("SkillParams: success_tol must be positive");
    if (!(safety_force > 0.0)) throw std::invalid_argument("SkillParams: safety_force must be positive");
  }
};

/// Linear pushing move: in-plane displacement with a held press force.
struct MotionCommand {
  double dx = 0.0;
  double dy = 0.0;
  double fz_cmd = 0.0;

  bool operator==(const MotionCommand&) const = default;
};

/// The six pushes: +x, -2x, +x, then +y, -2y, +y.
inline std::array<MotionCommand, 6> build_actions(const SkillParams& p) {
  p.validate();
  const double px = p.p_sigma_x;
  const double py = p.p_sigma_y;
  const double f = p.f_z;
  return {{{+px, 0.0, f}, {-2.0 * px, 0.0, f}, {+px, 0.0, f}, {0.0, +py, f}, {0.0, -2.0 * py, f}, {0.0, +py, f}}};
}

struct Inspection {
  bool success = false;
  double final_error = 0.0;  // mm
};

inline constexpr double kContainmentTol = 1e-9;

inline Inspection inspect(const Scene& scene, const Pose& object_pose, double tol) {
  const double position_error = (object_pose.position() - scene.goal_pose().position()).norm();
  const double containment = pocket_containment_error(scene.object_at(object_pose), scene.pocket());
  Inspection r;
  r.final_error = std::max(position_error, containment);
  r.success = r.final_error <= tol && containment <= kContainmentTol;
  return r;
}

struct SkillOutcome {
  bool success = false;
  double final_error = std::numeric_limits<double>::infinity();
  int actions_executed = 0;
  std::vector<TraceSample> force_trace;
  Pose final_pose{};
  double peak_force = 0.0;  // largest in-plane reaction, N
  int steps = 0;
  bool stuck = false;
  bool aborted = false;
  double max_balance_residual = 0.0;
  bool balance_consistent = true;
  std::string failure;  // empty on success
};

namespace detail {

inline void finish(SkillOutcome& out, PressRig& rig, const Scene& scene, double tol) {
  const Inspection ins = inspect(scene, rig.object().pose, tol);
  out.final_pose = rig.object().pose;
  out.final_error = ins.final_error;
  out.success = ins.success && !rig.aborted();
  out.peak_force = rig.peak_force();
  out.steps = rig.steps();
  out.stuck = rig.object().stuck;
  out.aborted = rig.aborted();
  out.max_balance_residual = rig.max_balance_residual();
  out.balance_consistent = rig.balance_consistent();
  out.force_trace = rig.take_trace();
  if (!out.success && out.failure.empty()) out.failure = out.aborted ? "safety_abort" : "inspection_failed";
}

}  // namespace detail

/// Runs confirm, the six pushes and the final inspection on a released object.
inline SkillOutcome execute_skill(const Scene& scene, const Pose& object_start, const ControllerConfig& ctl,
                                  const SkillParams& p) {
  p.validate();
  SkillOutcome out;
  PressRig rig(scene, ctl, object_start, /*grasped=*/false, p.safety_force);

  // Confirm: object resting on the holder, press settled.
  const ContactState initial = enumerate_contacts(scene, object_start);
  if (initial.max_depth() > scene.seat_margin()) {
    out.failure = "object_not_seated";
    detail::finish(out, rig, scene, p.success_tol);
    out.success = false;
    return out;
  }
  if (!rig.settle_press(p.f_z)) {
    out.failure = rig.aborted() ? "safety_abort" : "press_not_settled";
    detail::finish(out, rig, scene, p.success_tol);
    out.success = false;
    return out;
  }

  const auto actions = build_actions(p);
  const double gmax = ctl.gains.max_substep;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i == 3) rig.recenter();
    const MotionCommand& a = actions[i];
    const Vec2 target = rig.gripper() + Vec2(a.dx, a.dy);
    const int budget = static_cast<int>(std::hypot(a.dx, a.dy) / gmax) + 200;
    for (int s = 0; s < budget && (target - rig.gripper()).norm() > 1e-6; ++s) {
      if (!rig.step(target, a.fz_cmd)) break;
    }
    if (rig.aborted()) break;
    out.actions_executed = static_cast<int>(i) + 1;
  }

  detail::finish(out, rig, scene, p.success_tol);
  return out;
}

}  // namespace pushskill
