#pragma once

// Planar primitives for the holder-frame simulator: poses, convex polygons,
// fixture faces and the contact queries built on them. Units are mm and rad.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushskill {

using Vec2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Planar configuration in the holder frame. Yaw is counterclockwise and
/// always kept in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Pose() = default;
  Pose(double x_mm, double y_mm, double yaw_rad) : x(x_mm), y(y_mm), yaw(normalize_angle(yaw_rad)) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(yaw_rad))
      throw std::invalid_argument("Pose: non-finite component");
  }

  Vec2 position() const { return {x, y}; }

  Pose translated(const Vec2& d) const { return {x + d.x(), y + d.y(), yaw}; }

  bool operator==(const Pose&) const = default;
};

/// Rigid transform of a point given in the pose's local frame into the holder frame.
inline Vec2 transform(const Pose& pose, const Vec2& local_point) {
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  return {pose.x + c * local_point.x() - s * local_point.y(),
          pose.y + s * local_point.x() + c * local_point.y()};
}

/// Convex polygon with counterclockwise winding.
class Polygon {
 public:
  explicit Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) { validate(); }

  /// Axis-aligned rectangle centered on the origin.
  static Polygon rectangle(double width, double height) {
    const double hw = 0.5 * width;
    const double hh = 0.5 * height;
    return Polygon({{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}});
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  double area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      twice += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * twice;
  }

  Vec2 centroid() const {
    Vec2 c = Vec2::Zero();
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
  }

  /// Largest vertex distance from the local origin.
  double radius() const {
    double r = 0.0;
    for (const auto& v : vertices_) r = std::max(r, v.norm());
    return r;
  }

  /// Signed distance of a point to the boundary: negative inside, positive outside.
  /// Outside values are the Euclidean distance to the nearest edge.
  double signed_distance(const Vec2& p) const {
    double max_edge = -std::numeric_limits<double>::infinity();
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Vec2& a = vertices_[i];
      const Vec2& b = vertices_[(i + 1) % vertices_.size()];
      const Vec2 e = b - a;
      const double len = e.norm();
      // Outward normal of a CCW edge is (e.y, -e.x).
      const double d = cross(e, p - a) / -len;
      max_edge = std::max(max_edge, d);
      const double t = std::clamp((p - a).dot(e) / (len * len), 0.0, 1.0);
      nearest = std::min(nearest, (a + t * e - p).norm());
    }
    return max_edge <= 0.0 ? max_edge : nearest;
  }

  bool contains(const Vec2& p, double tol = 0.0) const { return signed_distance(p) <= tol; }

  Polygon transformed(const Pose& pose) const {
    std::vector<Vec2> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) out.push_back(transform(pose, v));
    return Polygon(std::move(out));
  }

 private:
  void validate() const {
    if (vertices_.size() < 3) throw std::invalid_argument("Polygon: fewer than 3 vertices");
    for (const auto& v : vertices_)
      if (!v.allFinite()) throw std::invalid_argument("Polygon: non-finite vertex");
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
      const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
      if (cross(e0, e1) < -1e-12) throw std::invalid_argument("Polygon: not convex/CCW");
    }
    if (area() <= 1e-12) throw std::invalid_argument("Polygon: degenerate area");
  }

  std::vector<Vec2> vertices_;
};

/// Fixture contact face. The outward normal points away from the fixture body,
/// i.e. into the free side the object occupies.
class Segment {
 public:
  Segment(Vec2 a, Vec2 b, Vec2 outward_normal) : a_(std::move(a)), b_(std::move(b)), n_(std::move(outward_normal)) {
    const Vec2 e = b_ - a_;
    if (!(e.norm() > 0.0)) throw std::invalid_argument("Segment: zero length");
    if (std::abs(n_.norm() - 1.0) > 1e-9) throw std::invalid_argument("Segment: normal not unit length");
    if (std::abs(n_.dot(e)) > 1e-9 * e.norm()) throw std::invalid_argument("Segment: normal not perpendicular");
  }

  const Vec2& a() const { return a_; }
  const Vec2& b() const { return b_; }
  const Vec2& outward_normal() const { return n_; }
  double length() const { return (b_ - a_).norm(); }
  Vec2 direction() const { return (b_ - a_) / length(); }

  /// Signed distance of p from the face line, positive on the free side.
  double side(const Vec2& p) const { return n_.dot(p - a_); }

 private:
  Vec2 a_;
  Vec2 b_;
  Vec2 n_;
};

struct ContactPatch {
  double depth = 0.0;  // mm, >= 0
  Vec2 normal = Vec2::Zero();
  Vec2 point = Vec2::Zero();
};

namespace detail {

// Sutherland-Hodgman clip of a convex polygon against keep(p) = dot(dir, p) >= offset.
inline std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& dir, double offset) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double dp = dir.dot(p) - offset;
    const double dq = dir.dot(q) - offset;
    if (dp >= 0.0) out.push_back(p);
    if ((dp >= 0.0) != (dq >= 0.0)) out.push_back(p + (q - p) * (dp / (dp - dq)));
  }
  return out;
}

}  // namespace detail

/// Deepest signed face distance of the part of `poly` lying within the
/// segment's extent (the slab swept along its normal). Negative values are
/// penetration behind the face. Empty when the polygon misses the slab.
struct FaceGap {
  double gap = 0.0;
  Vec2 point = Vec2::Zero();
};

inline std::optional<FaceGap> face_gap(const Polygon& poly, const Segment& seg) {
  const Vec2 u = seg.direction();
  std::vector<Vec2> clipped = detail::clip_half_plane(poly.vertices(), u, u.dot(seg.a()));
  if (clipped.empty()) return std::nullopt;
  clipped = detail::clip_half_plane(clipped, -u, -u.dot(seg.b()));
  if (clipped.empty()) return std::nullopt;

  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : clipped) best = std::min(best, seg.side(v));
  // Average of the deepest points so a flush edge reports its midpoint.
  Vec2 sum = Vec2::Zero();
  int count = 0;
  for (const auto& v : clipped) {
    if (seg.side(v) <= best + 1e-9) {
      sum += v;
      ++count;
    }
  }
  return FaceGap{best, sum / count};
}

/// Contact between a polygon and a fixture face, or nothing when the polygon
/// stays on the free side beyond `touch_tol`.
inline std::optional<ContactPatch> penetration(const Polygon& poly, const Segment& seg, double touch_tol = 1e-6) {
  const auto g = face_gap(poly, seg);
  if (!g || g->gap > touch_tol) return std::nullopt;
  return ContactPatch{std::max(0.0, -g->gap), seg.outward_normal(), g->point};
}

/// Worst distance by which an object vertex lies outside the pocket; 0 when contained.
inline double pocket_containment_error(const Polygon& object, const Polygon& pocket) {
  double worst = 0.0;
  for (const auto& v : object.vertices()) worst = std::max(worst, pocket.signed_distance(v));
  return worst;
}

}  // namespace pushskill
