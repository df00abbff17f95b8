#pragma once

// Closed-loop simulation rig: one gripper pressing on one object in one scene,
// stepped by the hybrid controller and resolved by the contact model.

#include "pushskill/contact_model.hpp"
#include "pushskill/controller.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pushskill {

struct TraceSample {
  int step = 0;
  Wrench wrench;
  MotionRegime regime = MotionRegime::StickAdvance;
};

class PressRig {
 public:
  PressRig(const Scene& scene, const ControllerConfig& ctl, const Pose& object_start, bool grasped,
           double safety_force)
      : scene_(scene), ctl_(ctl), grasped_(grasped), safety_force_(safety_force) {
    ctl_.gains.validate();
    ctl_.gripper.validate();
    object_.pose = object_start;
    gripper_ = object_start.position();
    axes_ = selection_pair({Axis::z});
  }

  /// One control step toward `target` (gripper xy) while regulating press
  /// force to `fz_cmd`. Returns false once the safety bound has tripped.
  bool step(const Vec2& target, double fz_cmd) {
    if (aborted_) return false;
    CommandFrame cmd;
    cmd.pose_cmd = Pose(target.x(), target.y(), 0.0);
    cmd.wrench_cmd.fz = fz_cmd;
    EndEffectorState cur;
    cur.pose = Pose(gripper_.x(), gripper_.y(), 0.0);
    cur.z = z_;
    Wrench meas = last_;
    meas.fz = press();

    const Vector6d motion = hybrid_step(cmd, cur, meas, axes_.position, ctl_.gains);
    z_ += motion[2];
    advance(Vec2(motion[0], motion[1]));
    return !aborted_;
  }

  /// Holds xy and regulates the press force until it sits within `rel_tol`.
  bool settle_press(double fz_cmd, double rel_tol = 0.01, int max_steps = 500) {
    for (int i = 0; i < max_steps; ++i) {
      if (std::abs(press() - fz_cmd) <= rel_tol * fz_cmd) return true;
      if (!step(gripper_, fz_cmd)) return false;
    }
    return std::abs(press() - fz_cmd) <= rel_tol * fz_cmd;
  }

  /// Repositions the gripper over the object center without loading it.
  void recenter() { gripper_ = object_.pose.position() + (grasped_ ? object_.lag : Vec2::Zero()); }

  bool gripper_on_object() const {
    return grasped_ || scene_.object_at(object_.pose).contains(gripper_, 1e-9);
  }

  double press() const { return scene_.press_stiffness() * std::max(0.0, z_); }
  const ObjectState& object() const { return object_; }
  const Vec2& gripper() const { return gripper_; }
  bool aborted() const { return aborted_; }
  int steps() const { return steps_; }
  double peak_force() const { return peak_; }
  double max_balance_residual() const { return max_residual_; }
  bool balance_consistent() const { return balance_ok_; }
  const std::vector<TraceSample>& trace() const { return trace_; }
  std::vector<TraceSample> take_trace() { return std::move(trace_); }

 private:
  void advance(const Vec2& d) {
    const double len = d.norm();
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / kMaxSubstep - 1e-12)));
    const Vec2 piece = d / pieces;
    Wrench reaction;
    reaction.fz = press();
    MotionRegime regime = MotionRegime::StickAdvance;
    for (int i = 0; i < pieces; ++i) {
      if (gripper_on_object()) {
        const StepResult r = resolve_step(scene_, object_, piece, press(), grasped_);
        object_ = r.state;
        reaction = r.reaction;
        regime = r.regime;
        max_residual_ = std::max(max_residual_, std::abs(r.balance.vertical_residual()));
        balance_ok_ = balance_ok_ && r.balance.consistent(scene_.friction());
      } else {
        reaction = Wrench{0.0, 0.0, press(), 0.0, 0.0, 0.0};
        regime = MotionRegime::SlipOnObject;
      }
      gripper_ += piece;
    }
    last_ = reaction;
    trace_.push_back({steps_, reaction, regime});
    ++steps_;
    peak_ = std::max(peak_, reaction.planar_force());
    if (reaction.planar_force() > safety_force_) aborted_ = true;
  }

  const Scene& scene_;
  ControllerConfig ctl_;
  bool grasped_;
  double safety_force_;
  SelectionPair axes_;
  ObjectState object_;
  Vec2 gripper_;
  double z_ = 0.0;
  Wrench last_;
  std::vector<TraceSample> trace_;
  int steps_ = 0;
  double peak_ = 0.0;
  double max_residual_ = 0.0;
  bool balance_ok_ = true;
  bool aborted_ = false;
};

}  // namespace pushskill
