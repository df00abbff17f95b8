#pragma once

// Hybrid position/force control in the end-effector frame. Axes selected by K
// track a commanded pose with a proportional law; the complementary axes K' =
// I - K run an admittance loop turning force error into position offsets.

#include "pushskill/geometry.hpp"
#include "pushskill/wrench.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <initializer_list>
#include <stdexcept>
#include <utility>

namespace pushskill {

/// Diagonal 0/1 selection matrix over (x, y, z, rx, ry, rz).
class SelectionMatrix {
 public:
  SelectionMatrix() = default;
  explicit SelectionMatrix(std::array<bool, 6> diag) : diag_(diag) {}

  static SelectionMatrix identity() { return SelectionMatrix({true, true, true, true, true, true}); }

  bool operator[](Axis a) const { return diag_[static_cast<int>(a)]; }
  bool operator[](int i) const { return diag_[i]; }

  SelectionMatrix complement() const {
    std::array<bool, 6> c{};
    for (int i = 0; i < 6; ++i) c[i] = !diag_[i];
    return SelectionMatrix(c);
  }

  Eigen::Matrix<double, 6, 6> matrix() const {
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    for (int i = 0; i < 6; ++i) m(i, i) = diag_[i] ? 1.0 : 0.0;
    return m;
  }

  bool operator==(const SelectionMatrix&) const = default;

 private:
  std::array<bool, 6> diag_{};
};

struct SelectionPair {
  SelectionMatrix position;  // K
  SelectionMatrix force;     // K' = I - K
};

/// Force control on `force_axes`, position control on the rest.
inline SelectionPair selection_pair(std::initializer_list<Axis> force_axes) {
  std::array<bool, 6> k{true, true, true, true, true, true};
  for (Axis a : force_axes) k[static_cast<int>(a)] = false;
  SelectionMatrix kp(k);
  return {kp, kp.complement()};
}

inline SelectionPair selection_pair_from_mask(unsigned force_mask) {
  std::array<bool, 6> k{};
  for (int i = 0; i < 6; ++i) k[i] = !((force_mask >> i) & 1u);
  SelectionMatrix kp(k);
  return {kp, kp.complement()};
}

/// Defaults are stable against a 10 N/mm environment; the admittance loop is
/// stable for 0 < admittance_gain * stiffness < 2.
struct ControllerGains {
  double p_gain = 0.5;             // per step
  double admittance_gain = 0.02;   // mm per N per step
  double max_substep = 0.1;        // mm (or rad) per step and axis

  void validate() const {
    if (!(p_gain > 0.0 && p_gain <= 1.0)) throw std::invalid_argument("ControllerGains: p_gain must be in (0, 1]");
    if (!(admittance_gain > 0.0)) throw std::invalid_argument("ControllerGains: admittance_gain must be positive");
    if (!(max_substep > 0.0)) throw std::invalid_argument("ControllerGains: max_substep must be positive");
  }
};

/// Vacuum-gripper bellows compliance.
struct GripperCompliance {
  double stiffness = 10.0;      // N/mm
  double max_deflection = 2.0;  // mm

  void validate() const {
    if (!(stiffness > 0.0)) throw std::invalid_argument("GripperCompliance: stiffness must be positive");
    if (!(max_deflection > 0.0)) throw std::invalid_argument("GripperCompliance: max_deflection must be positive");
  }
};

/// Per-axis translational deflection (x, y, z) of the suction cup under a load.
inline Eigen::Vector3d gripper_deflection(const Wrench& w, const GripperCompliance& c) {
  c.validate();
  auto axis = [&](double f) { return std::clamp(f / c.stiffness, -c.max_deflection, c.max_deflection); };
  return {axis(w.fx), axis(w.fy), axis(w.fz)};
}

struct ControllerConfig {
  ControllerGains gains{};
  GripperCompliance gripper{};
};

/// End-effector configuration: planar pose, press depth z and the tilts.
struct EndEffectorState {
  Pose pose{};
  double z = 0.0;
  double rx = 0.0;
  double ry = 0.0;

  Vector6d vector() const { return (Vector6d() << pose.x, pose.y, z, rx, ry, pose.yaw).finished(); }
};

/// Setpoints: pose axes are read where K = 1, wrench axes where K' = 1.
struct CommandFrame {
  Pose pose_cmd{};
  double z_cmd = 0.0;
  Wrench wrench_cmd{};
};

struct AdmittanceState {
  Vector6d offset = Vector6d::Zero();
};

/// One admittance increment: gain * K' * (h_cmd - h_meas).
inline Vector6d admittance_increment(const Wrench& h_cmd, const Wrench& h_meas, const SelectionMatrix& force_axes,
                                     double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("admittance: gain must be positive");
  return gain * (force_axes.matrix() * (h_cmd.vector() - h_meas.vector()));
}

/// Accumulates the admittance offset and returns the new total.
inline Vector6d admittance_update(const Wrench& h_cmd, const Wrench& h_meas, const SelectionMatrix& force_axes,
                                  double gain, AdmittanceState& state) {
  state.offset += admittance_increment(h_cmd, h_meas, force_axes, gain);
  return state.offset;
}

/// Motion command for one control step. Position axes follow a P-law toward
/// the commanded pose, force axes follow the admittance law; each axis is
/// clamped to max_substep.
inline Vector6d hybrid_step(const CommandFrame& cmd, const EndEffectorState& current, const Wrench& h_meas,
                            const SelectionMatrix& position_axes, const ControllerGains& gains) {
  const SelectionMatrix force_axes = position_axes.complement();
  const Vector6d target = (Vector6d() << cmd.pose_cmd.x, cmd.pose_cmd.y, cmd.z_cmd, 0.0, 0.0, cmd.pose_cmd.yaw).finished();
  Vector6d err = target - current.vector();
  err[5] = normalize_angle(err[5]);

  const Vector6d position_part = gains.p_gain * (position_axes.matrix() * err);
  const Vector6d force_part = admittance_increment(cmd.wrench_cmd, h_meas, force_axes, gains.admittance_gain);

  Vector6d out;
  for (int i = 0; i < 6; ++i) {
    const double raw = position_axes[i] ? position_part[i] : force_part[i];
    out[i] = std::clamp(raw, -gains.max_substep, gains.max_substep);
  }
  return out;
}

}  // namespace pushskill
