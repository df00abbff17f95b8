#pragma once

// Scenario files: one JSON document describing the holder, friction, gripper,
// controller gains, skill and spiral parameters.

#include "pushskill/baselines.hpp"
#include "pushskill/contact_model.hpp"
#include "pushskill/controller.hpp"
#include "pushskill/skill.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushskill {

struct Scenario {
  std::string id;
  Scene scene;
  ControllerConfig controller{};
  SkillParams skill{};
  SpiralParams spiral{};
  double placement_jitter = 1.0;  // mm, release offset from suction-cup deflection
};

struct HolderLayout {
  double object_width = 40.0;   // mm, x
  double object_height = 30.0;  // mm, y
  double clearance = 0.1;       // mm per side
  double lip_height = 0.3;      // mm
  double seat_margin = 5.0;     // mm
  FrictionParams friction{};
  double press_stiffness = 10.0;
};

/// Rectangular pocket with fixture 1 on the left wall, 2 on the right, 3/4
/// splitting the bottom wall and 5/6 splitting the top wall.
inline Scene rectangular_holder(const HolderLayout& l) {
  const double hx = 0.5 * l.object_width + l.clearance;
  const double hy = 0.5 * l.object_height + l.clearance;
  auto fixture = [&](int id, Vec2 a, Vec2 b, Vec2 n) { return Fixture{id, Segment(a, b, n), l.lip_height}; };
  std::vector<Fixture> fx{
      fixture(1, {-hx, hy}, {-hx, -hy}, {1, 0}),
      fixture(2, {hx, -hy}, {hx, hy}, {-1, 0}),
      fixture(3, {-hx, -hy}, {0, -hy}, {0, 1}),
      fixture(4, {0, -hy}, {hx, -hy}, {0, 1}),
      fixture(5, {hx, hy}, {0, hy}, {0, -1}),
      fixture(6, {0, hy}, {-hx, hy}, {0, -1}),
  };
  return Scene(Scene::Params{Polygon::rectangle(2 * hx, 2 * hy), std::move(fx),
                             Polygon::rectangle(l.object_width, l.object_height), l.friction, l.press_stiffness,
                             Pose{}, l.seat_margin});
}

namespace detail {

inline Vec2 vec2(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("scenario: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json json_vec(const Vec2& v) { return nlohmann::json::array({v.x(), v.y()}); }

inline Polygon polygon(const nlohmann::json& j) {
  std::vector<Vec2> v;
  for (const auto& p : j) v.push_back(vec2(p));
  return Polygon(std::move(v));
}

inline nlohmann::json json_polygon(const Polygon& p) {
  auto arr = nlohmann::json::array();
  for (const auto& v : p.vertices()) arr.push_back(json_vec(v));
  return arr;
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j, std::string id = "scenario") {
  try {
    const auto& js = j.at("scene");
    std::vector<Fixture> fixtures;
    for (const auto& f : js.at("fixtures")) {
      fixtures.push_back(Fixture{f.at("id").get<int>(),
                                 Segment(detail::vec2(f.at("a")), detail::vec2(f.at("b")), detail::vec2(f.at("normal"))),
                                 f.at("lip_height_mm").get<double>()});
    }
    const auto& g = js.at("goal_pose");
    FrictionParams fp{j.at("friction").at("mu1").get<double>(), j.at("friction").at("mu2").get<double>()};
    const auto& jg = j.at("gripper");
    GripperCompliance gripper{jg.at("stiffness_n_per_mm").get<double>(), jg.at("max_deflection_mm").get<double>()};

    Scene scene(Scene::Params{detail::polygon(js.at("pocket")), std::move(fixtures), detail::polygon(js.at("object")),
                              fp, gripper.stiffness,
                              Pose(g.at("x").get<double>(), g.at("y").get<double>(), g.value("yaw", 0.0)),
                              js.value("seat_margin_mm", 5.0)});

    const double declared = js.at("clearance_mm").get<double>();
    if (std::abs(scene.clearance() - declared) > 1e-6)
      throw std::runtime_error("scenario: clearance_mm does not match the geometry (" +
                               std::to_string(scene.clearance()) + " mm)");

    const auto& jc = j.at("controller");
    ControllerConfig ctl{ControllerGains{jc.at("p_gain").get<double>(), jc.at("admittance_gain").get<double>(),
                                         jc.at("max_substep_mm").get<double>()},
                         gripper};
    ctl.gains.validate();
    ctl.gripper.validate();

    const auto& jk = j.at("skill");
    SkillParams skill{jk.at("p_sigma_x_mm").get<double>(), jk.at("p_sigma_y_mm").get<double>(),
                      jk.at("f_z_n").get<double>(), jk.at("success_tol_mm").get<double>(),
                      jk.value("safety_force_n", 50.0)};
    skill.validate();

    const auto& jsp = j.at("spiral");
    SpiralParams spiral{jsp.at("max_radius_mm").get<double>(), jsp.at("pitch_mm").get<double>(),
                        jsp.at("step_len_mm").get<double>(), jsp.value("f_z_n", skill.f_z)};
    spiral.validate(ctl.gains.max_substep);

    Scenario s{j.value("id", id), std::move(scene), ctl, skill, spiral, js.value("placement_jitter_mm", 1.0)};
    if (!(s.placement_jitter >= 0.0)) throw std::runtime_error("scenario: placement_jitter_mm must be >= 0");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("scenario: ") + e.what());
  }
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json fixtures = nlohmann::json::array();
  for (const auto& f : s.scene.fixtures()) {
    fixtures.push_back({{"id", f.id},
                        {"a", detail::json_vec(f.face.a())},
                        {"b", detail::json_vec(f.face.b())},
                        {"normal", detail::json_vec(f.face.outward_normal())},
                        {"lip_height_mm", f.lip_height}});
  }
  const Pose& g = s.scene.goal_pose();
  return {
      {"id", s.id},
      {"scene",
       {{"pocket", detail::json_polygon(s.scene.pocket())},
        {"object", detail::json_polygon(s.scene.object_footprint())},
        {"fixtures", fixtures},
        {"clearance_mm", s.scene.clearance()},
        {"goal_pose", {{"x", g.x}, {"y", g.y}, {"yaw", g.yaw}}},
        {"seat_margin_mm", s.scene.seat_margin()},
        {"placement_jitter_mm", s.placement_jitter}}},
      {"friction", {{"mu1", s.scene.friction().mu1}, {"mu2", s.scene.friction().mu2}}},
      {"gripper",
       {{"stiffness_n_per_mm", s.controller.gripper.stiffness},
        {"max_deflection_mm", s.controller.gripper.max_deflection}}},
      {"controller",
       {{"p_gain", s.controller.gains.p_gain},
        {"admittance_gain", s.controller.gains.admittance_gain},
        {"max_substep_mm", s.controller.gains.max_substep}}},
      {"skill",
       {{"p_sigma_x_mm", s.skill.p_sigma_x},
        {"p_sigma_y_mm", s.skill.p_sigma_y},
        {"f_z_n", s.skill.f_z},
        {"success_tol_mm", s.skill.success_tol},
        {"safety_force_n", s.skill.safety_force}}},
      {"spiral",
       {{"max_radius_mm", s.spiral.max_radius},
        {"pitch_mm", s.spiral.pitch},
        {"step_len_mm", s.spiral.step_len},
        {"f_z_n", s.spiral.f_z}}},
  };
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("scenario: " + path + ": " + e.what());
  }
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return scenario_from_json(j, stem);
}

/// Built-in counterpart of scenarios/holder_a.json.
inline Scenario default_scenario() {
  return Scenario{"holder_a", rectangular_holder(HolderLayout{}), ControllerConfig{}, SkillParams{}, SpiralParams{}, 1.0};
}

}  // namespace pushskill
