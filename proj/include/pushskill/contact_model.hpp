#pragma once

// Quasi-static contact model for a flat object pressed onto a holder by a
// suction gripper: fixture contact enumeration, the per-configuration force
// balance, the pushability test and the single-step stick/slip resolver.
//
// Sign convention for the vertical balance: every normal force is stored as a
// non-negative magnitude. Gripper press and the incline normal act into the
// holder, the floor reaction acts out of it, so the balance residual is
//   gripper*cos(tilt) + incline*cos(tilt) - floor + incline_friction*sin(tilt).

#include "pushskill/geometry.hpp"
#include "pushskill/wrench.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushskill {

inline constexpr double kTouchTol = 1e-6;        // mm
inline constexpr double kMaxSubstep = 0.1;       // mm
inline constexpr double kFixtureCapacity = 1000.0;  // N
inline constexpr int kFixtureCount = 6;

struct FrictionParams {
  double mu1 = 0.8;  // gripper on object
  double mu2 = 0.3;  // object on holder and fixtures

  void validate() const {
    if (!(mu2 > 0.0 && mu2 < mu1)) throw std::invalid_argument("FrictionParams: require 0 < mu2 < mu1");
  }
};

struct Fixture {
  int id = 0;
  Segment face;
  double lip_height = 0.5;  // mm a dragged object may ride over before catching
};

/// Holder, fixtures and object description. Immutable once built.
class Scene {
 public:
  struct Params {
    Polygon pocket;
    std::vector<Fixture> fixtures;
    Polygon object;  // footprint in the object frame
    FrictionParams friction{};
    double press_stiffness = 10.0;  // N/mm
    Pose goal{};
    double seat_margin = 5.0;  // mm of fixture overlap a released object can rest on
  };

  explicit Scene(Params p) : p_(std::move(p)) { validate(); }

  const Polygon& pocket() const { return p_.pocket; }
  const std::vector<Fixture>& fixtures() const { return p_.fixtures; }
  const Polygon& object_footprint() const { return p_.object; }
  const FrictionParams& friction() const { return p_.friction; }
  double press_stiffness() const { return p_.press_stiffness; }
  const Pose& goal_pose() const { return p_.goal; }
  double seat_margin() const { return p_.seat_margin; }

  Polygon object_at(const Pose& pose) const { return p_.object.transformed(pose); }

  const Fixture& fixture(int id) const {
    for (const auto& f : p_.fixtures)
      if (f.id == id) return f;
    throw std::out_of_range("Scene: no fixture " + std::to_string(id));
  }

  /// Smallest gap between the object at the goal pose and the pocket boundary.
  double clearance() const {
    double c = std::numeric_limits<double>::infinity();
    const Polygon at_goal = object_at(p_.goal);
    for (const auto& v : at_goal.vertices()) c = std::min(c, -p_.pocket.signed_distance(v));
    return c;
  }

 private:
  void validate() const {
    if (p_.fixtures.size() != kFixtureCount) throw std::invalid_argument("Scene: exactly 6 fixtures required");
    std::set<int> ids;
    const Vec2 center = p_.pocket.centroid();
    for (const auto& f : p_.fixtures) {
      if (f.id < 1 || f.id > kFixtureCount || !ids.insert(f.id).second)
        throw std::invalid_argument("Scene: fixture ids must be unique in 1..6");
      if (!(f.lip_height > 0.0)) throw std::invalid_argument("Scene: lip_height must be positive");
      if (f.face.side(center) <= 0.0) throw std::invalid_argument("Scene: fixture normal must face the pocket");
    }
    p_.friction.validate();
    if (!(p_.press_stiffness > 0.0)) throw std::invalid_argument("Scene: press_stiffness must be positive");
    if (!(p_.seat_margin > 0.0)) throw std::invalid_argument("Scene: seat_margin must be positive");
    if (!(clearance() > 0.0)) throw std::invalid_argument("Scene: goal pose needs positive clearance");
  }

  Params p_;
};

// ---------------------------------------------------------------------------
// Contact states

struct FixtureContact {
  int fixture_id = 0;
  ContactPatch patch;
};

/// Touching fixtures for one configuration. class_id is the bitmask of touching
/// fixture ids (bit id-1), so 0 is the free state.
struct ContactState {
  std::vector<FixtureContact> contacts;
  unsigned class_id = 0;

  bool free() const { return contacts.empty(); }
  bool touches(int fixture_id) const { return (class_id >> (fixture_id - 1)) & 1u; }
  double max_depth() const {
    double d = 0.0;
    for (const auto& c : contacts) d = std::max(d, c.patch.depth);
    return d;
  }
};

inline ContactState enumerate_contacts(const Scene& scene, const Pose& object_pose) {
  ContactState state;
  const Polygon obj = scene.object_at(object_pose);
  for (const auto& f : scene.fixtures()) {
    if (auto patch = penetration(obj, f.face, kTouchTol)) {
      state.contacts.push_back({f.id, *patch});
      state.class_id |= 1u << (f.id - 1);
    }
  }
  return state;
}

inline std::string contact_class_label(unsigned class_id) {
  if (class_id == 0) return "free";
  std::string s;
  for (int id = 1; id <= kFixtureCount; ++id) {
    if ((class_id >> (id - 1)) & 1u) {
      if (!s.empty()) s += '+';
      s += "F" + std::to_string(id);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Force relations

/// Floor reaction closing the vertical balance. Returned signed, so a negative
/// value is a reaction pushing back out of the holder.
inline double vertical_reaction(double gripper_normal, double incline_normal, double incline_friction, double tilt) {
  return -(gripper_normal * std::cos(tilt) + incline_normal * std::cos(tilt) + incline_friction * std::sin(tilt));
}

/// Tangential force the pressed gripper can transmit to the object.
inline double drive_force(double gripper_normal, double tilt, double mu1) {
  return mu1 * gripper_normal * std::cos(tilt) + gripper_normal * std::sin(tilt);
}

/// Holder resistance against the object, after eliminating the floor normal.
inline double resist_force(double gripper_normal, double incline_friction, double tilt, double mu2) {
  return -mu2 * gripper_normal * std::cos(tilt) - mu2 * incline_friction * std::sin(tilt);
}

struct ForceBalance {
  double gripper_normal = 0.0;   // F_N1
  double incline_normal = 0.0;   // F_N2
  double floor_normal = 0.0;     // F_N3, magnitude
  std::array<double, 3> fixture_normals{};  // F_N4..F_N6
  double gripper_friction = 0.0;  // f1
  double incline_friction = 0.0;  // f2
  double floor_friction = 0.0;    // f3
  double drive = 0.0;             // F_vo
  double resistance = 0.0;        // F_oh
  double tilt = 0.0;

  double vertical_residual() const {
    return gripper_normal * std::cos(tilt) + incline_normal * std::cos(tilt) - floor_normal +
           incline_friction * std::sin(tilt);
  }

  bool consistent(const FrictionParams& fp) const {
    constexpr double eps = 1e-9;
    if (gripper_normal < 0 || incline_normal < 0 || floor_normal < 0) return false;
    for (double f : fixture_normals)
      if (f < 0) return false;
    return gripper_friction <= fp.mu1 * gripper_normal + eps && incline_friction <= fp.mu2 * incline_normal + eps &&
           floor_friction <= fp.mu2 * floor_normal + eps;
  }
};

/// Balance for a flat object pressed with `press` and no incline contact.
inline ForceBalance flat_balance(double press, const FrictionParams& fp) {
  ForceBalance b;
  b.gripper_normal = press;
  b.floor_normal = -vertical_reaction(press, 0.0, 0.0, 0.0);
  b.drive = drive_force(press, 0.0, fp.mu1);
  b.resistance = resist_force(press, 0.0, 0.0, fp.mu2);
  return b;
}

/// Fixtures must outclass the drive by a wide margin (10x), and the drive must
/// beat the holder resistance.
inline bool pushability(const ForceBalance& balance, double fixture_capacity = kFixtureCapacity) {
  return fixture_capacity >= 10.0 * balance.drive && balance.drive > std::abs(balance.resistance);
}

// ---------------------------------------------------------------------------
// Stick/slip step resolution

enum class MotionRegime { StickAdvance, SlipOnObject, FreeSlideToContact, Stuck };

inline const char* to_string(MotionRegime r) {
  switch (r) {
    case MotionRegime::StickAdvance: return "stick_advance";
    case MotionRegime::SlipOnObject: return "slip_on_object";
    case MotionRegime::FreeSlideToContact: return "free_slide_to_contact";
    case MotionRegime::Stuck: return "stuck";
  }
  return "?";
}

/// Object configuration carried between steps. `lag` is the commanded motion a
/// stuck grasped object failed to follow.
struct ObjectState {
  Pose pose;
  Vec2 lag = Vec2::Zero();
  bool stuck = false;
};

struct StepResult {
  ObjectState state;
  MotionRegime regime = MotionRegime::StickAdvance;
  Wrench reaction;
  ForceBalance balance;
};

namespace detail {

struct HalfPlane {
  Vec2 n;        // motion t is allowed while n.t >= -slack
  double slack;  // >= 0
  int fixture_id;
};

// Projection of v onto the cone {w : n.w >= 0 for all n}; the 2D optimum is v
// itself, its projection on one boundary line, or the apex.
inline Vec2 project_onto_cone(const Vec2& v, const std::vector<const HalfPlane*>& active) {
  auto feasible = [&](const Vec2& w) {
    for (const auto* h : active)
      if (h->n.dot(w) < -1e-12) return false;
    return true;
  };
  if (feasible(v)) return v;
  Vec2 best = Vec2::Zero();
  double best_dist = v.norm();
  for (const auto* h : active) {
    const double along = h->n.dot(v);
    if (along >= 0.0) continue;
    const Vec2 w = v - along * h->n;
    const double dist = (w - v).norm();
    if (dist < best_dist && feasible(w)) {
      best = w;
      best_dist = dist;
    }
  }
  return best;
}

// Continuous sweep of a translation d against linear face constraints. The
// object follows the projection of d onto the tangent cone of the active faces,
// picking up new faces as it reaches them.
inline Vec2 sweep_translation(const Vec2& d, const std::vector<HalfPlane>& planes) {
  Vec2 t = Vec2::Zero();
  double tau = 0.0;
  for (int iter = 0; iter < 4 * kFixtureCount + 4 && tau < 1.0; ++iter) {
    std::vector<const HalfPlane*> active;
    for (const auto& h : planes)
      if (h.n.dot(t) + h.slack <= 1e-12) active.push_back(&h);
    const Vec2 v = project_onto_cone(d, active);
    if (v.norm() < 1e-15) break;
    double step = 1.0 - tau;
    for (const auto& h : planes) {
      const double rate = h.n.dot(v);
      if (rate >= 0.0 || h.n.dot(t) + h.slack <= 1e-12) continue;
      step = std::min(step, (h.n.dot(t) + h.slack) / -rate);
    }
    t += step * v;
    tau += step;
  }
  return t;
}

// Rotates the object flat against a face it touches at two vertices.
inline Pose align_to_faces(const Scene& scene, const Pose& pose) {
  const Polygon obj = scene.object_at(pose);
  for (const auto& f : scene.fixtures()) {
    std::vector<Vec2> touching;
    for (const auto& v : obj.vertices())
      if (std::abs(f.face.side(v)) <= kTouchTol) touching.push_back(v);
    if (touching.size() < 2) continue;
    const Vec2 edge = touching[1] - touching[0];
    const Vec2 dir = f.face.direction();
    double angle = std::atan2(cross(dir, edge), dir.dot(edge));
    // Edge may run either way along the face.
    if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
    if (angle < -std::numbers::pi / 2) angle += std::numbers::pi;
    if (std::abs(angle) < 1e-15) return pose;
    // Rotate about the deeper of the two vertices.
    const Vec2 pivot = f.face.side(touching[0]) <= f.face.side(touching[1]) ? touching[0] : touching[1];
    const double c = std::cos(-angle);
    const double s = std::sin(-angle);
    const Vec2 rel = pose.position() - pivot;
    const Vec2 rotated{c * rel.x() - s * rel.y(), s * rel.x() + c * rel.y()};
    return Pose(pivot.x() + rotated.x(), pivot.y() + rotated.y(), pose.yaw - angle);
  }
  return pose;
}

// Splits a planar load over the blocking faces (least squares, clamped >= 0).
inline std::array<double, 3> distribute_fixture_load(const Vec2& load, const std::vector<HalfPlane>& blocking) {
  std::array<double, 3> out{};
  if (blocking.empty() || load.norm() == 0.0) return out;
  if (blocking.size() == 1) {
    out[0] = std::max(0.0, -blocking[0].n.dot(load));
    return out;
  }
  Eigen::Matrix2d a;
  a.col(0) = -blocking[0].n;
  a.col(1) = -blocking[1].n;
  if (std::abs(a.determinant()) < 1e-12) {
    out[0] = std::max(0.0, -blocking[0].n.dot(load));
    return out;
  }
  const Vec2 x = a.inverse() * load;
  out[0] = std::max(0.0, x[0]);
  out[1] = std::max(0.0, x[1]);
  return out;
}

inline StepResult resolve_released(const Scene& scene, const ObjectState& in, const Vec2& d, double press) {
  const auto& fp = scene.friction();
  const Polygon obj = scene.object_at(in.pose);
  const Polygon moved = scene.object_at(in.pose.translated(d));

  std::vector<HalfPlane> planes;
  for (const auto& f : scene.fixtures()) {
    const Vec2& n = f.face.outward_normal();
    double gap;
    if (auto g = face_gap(obj, f.face)) {
      gap = g->gap;
    } else if (auto g_end = face_gap(moved, f.face)) {
      gap = g_end->gap - n.dot(d);
    } else {
      continue;
    }
    // A perched object (gap < 0) may never sink further behind the face.
    const double slack = std::max(gap, 0.0);
    if (slack > d.norm() + 1e-9) continue;
    planes.push_back({n, slack, f.id});
  }

  const Vec2 t = sweep_translation(d, planes);
  Pose next = align_to_faces(scene, in.pose.translated(t));

  StepResult r;
  r.state.pose = next;
  const Vec2 blocked = d - t;
  const bool slipping = blocked.norm() > 1e-9;
  const bool moving = t.norm() > 1e-9;
  r.regime = !slipping ? MotionRegime::StickAdvance
                       : (moving ? MotionRegime::FreeSlideToContact : MotionRegime::SlipOnObject);

  ForceBalance b = flat_balance(press, fp);
  b.floor_friction = (moving || slipping) ? fp.mu2 * b.floor_normal : 0.0;
  b.gripper_friction = slipping ? fp.mu1 * press : (moving ? b.floor_friction : 0.0);
  if (slipping) {
    const Vec2 dir = blocked.normalized();
    std::vector<HalfPlane> blocking;
    for (const auto& h : planes)
      if (h.n.dot(t) + h.slack <= 1e-9 && h.n.dot(dir) < 0.0) blocking.push_back(h);
    b.fixture_normals = distribute_fixture_load((b.gripper_friction - b.floor_friction) * dir, blocking);
    const Vec2 f = -fp.mu1 * press * dir;
    r.reaction.fx = f.x();
    r.reaction.fy = f.y();
  }
  r.reaction.fz = press;
  r.balance = b;
  return r;
}

inline StepResult resolve_grasped(const Scene& scene, const ObjectState& in, const Vec2& d, double press) {
  const auto& fp = scene.friction();
  StepResult r;
  r.state = in;
  const Vec2 grip = in.pose.position() + in.lag + d;

  if (in.stuck) {
    r.regime = MotionRegime::Stuck;
  } else {
    // Faces the object already rides over (overlap past the lip) do not
    // constrain it. Engaged faces push it back out through the gripper
    // compliance; pushing past the lip catches it.
    const Polygon obj = scene.object_at(in.pose);
    Pose candidate(grip.x(), grip.y(), in.pose.yaw);
    bool caught = false;
    bool funneled = false;
    for (const auto& f : scene.fixtures()) {
      const auto g0 = face_gap(obj, f.face);
      if (g0 && -g0->gap > f.lip_height + 1e-12) continue;
      const auto g1 = face_gap(scene.object_at(candidate), f.face);
      if (!g1 || g1->gap >= 0.0) continue;
      if (-g1->gap > f.lip_height + 1e-12) {
        caught = true;
        break;
      }
      candidate = candidate.translated(-g1->gap * f.face.outward_normal());
      funneled = true;
    }
    if (caught) {
      r.state.stuck = true;
      r.regime = MotionRegime::Stuck;
    } else {
      r.state.pose = candidate;
      r.regime = funneled ? MotionRegime::FreeSlideToContact : MotionRegime::StickAdvance;
    }
  }
  r.state.lag = grip - r.state.pose.position();

  // The measured in-plane reaction is the stretched gripper spring; engaged
  // fixtures carry it as normal load.
  const double k = scene.press_stiffness();
  const Vec2 force = -k * r.state.lag;
  const Polygon obj = scene.object_at(r.state.pose);
  double mz = 0.0;
  ForceBalance b = flat_balance(press, fp);
  int slot = 0;
  for (const auto& f : scene.fixtures()) {
    const auto g = face_gap(obj, f.face);
    if (!g || g->gap > kTouchTol || -g->gap > f.lip_height + 1e-12) continue;
    const double load = -force.dot(f.face.outward_normal());
    if (load <= 0.0) continue;
    const Vec2 fc = load * f.face.outward_normal();
    mz += cross(g->point - grip, fc);
    if (slot < 3) b.fixture_normals[slot++] = load;
  }
  b.floor_friction = (r.regime == MotionRegime::StickAdvance && d.norm() > 1e-9) ? fp.mu2 * b.floor_normal : 0.0;
  r.reaction = Wrench{force.x(), force.y(), press, 0.0, 0.0, mz};
  r.balance = b;
  return r;
}

}  // namespace detail

/// Advances the object by one gripper substep. Released objects are pushed by
/// friction and stop against fixtures while the gripper slides on; grasped
/// objects are dragged and catch once they ride past a fixture lip.
inline StepResult resolve_step(const Scene& scene, const ObjectState& state, const Vec2& gripper_delta,
                               double press_force, bool grasped) {
  if (gripper_delta.norm() > kMaxSubstep + 1e-12)
    throw std::invalid_argument("resolve_step: gripper delta exceeds max substep; substep the motion");
  if (!(press_force >= 0.0)) throw std::invalid_argument("resolve_step: negative press force");
  return grasped ? detail::resolve_grasped(scene, state, gripper_delta, press_force)
                 : detail::resolve_released(scene, state, gripper_delta, press_force);
}

}  // namespace pushskill
