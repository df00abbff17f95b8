#pragma once

#include <Eigen/Core>

#include <cmath>

namespace pushskill {

using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Operational-space axes, in selection-matrix order.
enum class Axis { x = 0, y = 1, z = 2, rx = 3, ry = 4, rz = 5 };

/// Six-axis force/torque sample in the end-effector frame (N, N*mm).
/// z points from the tool into the holder, so pressing reads positive fz.
struct Wrench {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double mz = 0.0;

  static Wrench from_vector(const Vector6d& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
  Vector6d vector() const { return (Vector6d() << fx, fy, fz, mx, my, mz).finished(); }

  double planar_force() const { return std::hypot(fx, fy); }
  bool finite() const { return vector().allFinite(); }

  bool operator==(const Wrench&) const = default;
};

}  // namespace pushskill
