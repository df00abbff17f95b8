#pragma once

// Shared fixtures for the test binaries: an extra scene with an inclined
// corner face and a brute-force released-pushing integrator.

#include "pushskill/contact_model.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace testing_support {

using namespace pushskill;

// 18 x 8 object in a 20.2 x 10.2 pocket whose top-right corner is cut by the
// line x + y = 14.1 (fixture 5).
inline Scene chamfered_scene() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Fixture> fx{
      {1, Segment({-10.1, 5.1}, {-10.1, -5.1}, {1, 0}), 0.3},
      {2, Segment({10.1, -5.1}, {10.1, 4.0}, {-1, 0}), 0.3},
      {3, Segment({-10.1, -5.1}, {0, -5.1}, {0, 1}), 0.3},
      {4, Segment({0, -5.1}, {10.1, -5.1}, {0, 1}), 0.3},
      {5, Segment({10.1, 4.0}, {9.0, 5.1}, {-s, -s}), 0.3},
      {6, Segment({9.0, 5.1}, {-10.1, 5.1}, {0, -1}), 0.3},
  };
  const Polygon pocket({{-10.1, -5.1}, {10.1, -5.1}, {10.1, 4.0}, {9.0, 5.1}, {-10.1, 5.1}});
  return Scene(Scene::Params{pocket, std::move(fx), Polygon::rectangle(18, 8)});
}

// Moves the object along d in `pieces` equal increments. After every increment
// the position is projected (Dykstra's alternating projections) onto the set
// where no face overlaps deeper than it already did, so overlap with a face
// can only shrink.
inline Vec2 fine_oracle(const Scene& scene, const Pose& start, const Vec2& d, int pieces = 100) {
  std::map<int, double> allowed;
  auto overlap = [&](const Vec2& pos, const Fixture& f) -> std::optional<double> {
    const auto g = face_gap(scene.object_at(Pose(pos.x(), pos.y(), start.yaw)), f.face);
    if (!g) return std::nullopt;
    return -g->gap;
  };
  Vec2 pos = start.position();
  for (const auto& f : scene.fixtures()) allowed[f.id] = std::max(0.0, overlap(pos, f).value_or(0.0));

  const Vec2 piece = d / pieces;
  const auto& fixtures = scene.fixtures();
  for (int i = 0; i < pieces; ++i) {
    pos += piece;
    std::vector<Vec2> carry(fixtures.size(), Vec2::Zero());
    for (int cycle = 0; cycle < 500; ++cycle) {
      const Vec2 before = pos;
      for (std::size_t k = 0; k < fixtures.size(); ++k) {
        const Vec2 y = pos + carry[k];
        const auto o = overlap(y, fixtures[k]);
        const double excess = o ? std::max(0.0, *o - allowed[fixtures[k].id]) : 0.0;
        pos = y + excess * fixtures[k].face.outward_normal();
        carry[k] = y - pos;
      }
      if ((pos - before).norm() < 1e-14) break;
    }
    for (const auto& f : fixtures) {
      const auto o = overlap(pos, f);
      allowed[f.id] = std::min(allowed[f.id], std::max(0.0, o.value_or(allowed[f.id])));
    }
  }
  return pos;
}

}  // namespace testing_support
