#include "pushskill/scenario.hpp"
#include "pushskill/skill.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pushskill;

namespace {

Pose offset(const Scene& s, double mag, double angle) {
  return s.goal_pose().translated(mag * Vec2(std::cos(angle), std::sin(angle)));
}

}  // namespace

TEST(Actions, Defaults) {
  const auto a = build_actions(SkillParams{});
  const std::array<MotionCommand, 6> expected{{{8, 0, 5}, {-16, 0, 5}, {8, 0, 5}, {0, 8, 5}, {0, -16, 5}, {0, 8, 5}}};
  EXPECT_EQ(a, expected);
}

TEST(Actions, ScaledPatternAndTelescoping) {
  SkillParams p;
  p.p_sigma_x = 1;
  p.p_sigma_y = 1;
  p.f_z = 1;
  const auto a = build_actions(p);
  const std::array<MotionCommand, 6> expected{{{1, 0, 1}, {-2, 0, 1}, {1, 0, 1}, {0, 1, 1}, {0, -2, 1}, {0, 1, 1}}};
  EXPECT_EQ(a, expected);

  p.p_sigma_x = 3.7;
  p.p_sigma_y = 1.3;
  double sx = 0, sy = 0;
  for (const auto& c : build_actions(p)) {
    EXPECT_TRUE((c.dx == 0) != (c.dy == 0));
    sx += c.dx;
    sy += c.dy;
  }
  EXPECT_EQ(sx, 0.0);
  EXPECT_EQ(sy, 0.0);
}

TEST(Actions, RejectsBadParams) {
  SkillParams p;
  p.p_sigma_x = 0;
  EXPECT_THROW(build_actions(p), std::invalid_argument);
  p = SkillParams{};
  p.f_z = -1;
  EXPECT_THROW(build_actions(p), std::invalid_argument);
  p = SkillParams{};
  p.success_tol = 0;
  EXPECT_THROW(build_actions(p), std::invalid_argument);
}

TEST(Inspect, Examples) {
  const Scene s = default_scenario().scene;
  Inspection i = inspect(s, s.goal_pose(), 0.2);
  EXPECT_TRUE(i.success);
  EXPECT_EQ(i.final_error, 0.0);

  i = inspect(s, Pose(0.5, 0, 0), 0.2);
  EXPECT_FALSE(i.success);
  EXPECT_NEAR(i.final_error, 0.5, 1e-12);

  i = inspect(s, Pose(0.1, 0, 0), 0.2);
  EXPECT_TRUE(i.success);
  EXPECT_NEAR(i.final_error, 0.1, 1e-12);

  // Inside tolerance but poking out of the pocket.
  i = inspect(s, Pose(0.15, 0, 0), 0.2);
  EXPECT_FALSE(i.success);
}

TEST(Skill, AtGoal) {
  const Scenario sc = default_scenario();
  const SkillOutcome o = execute_skill(sc.scene, sc.scene.goal_pose(), sc.controller, sc.skill);
  EXPECT_TRUE(o.success);
  EXPECT_LE(o.final_error, sc.skill.success_tol);
  EXPECT_EQ(o.actions_executed, 6);
  EXPECT_TRUE(o.failure.empty());
}

TEST(Skill, FourMillimetresAtThirtyDegrees) {
  const Scenario sc = default_scenario();
  const SkillOutcome o = execute_skill(sc.scene, offset(sc.scene, 4, std::numbers::pi / 6), sc.controller, sc.skill);
  EXPECT_TRUE(o.success);
  EXPECT_LE(o.final_error, 0.2);
  EXPECT_FALSE(o.force_trace.empty());
  EXPECT_EQ(static_cast<int>(o.force_trace.size()), o.steps);
}

TEST(Skill, TwelveMillimetresFails) {
  const Scenario sc = default_scenario();
  const SkillOutcome o = execute_skill(sc.scene, offset(sc.scene, 12, 0.0), sc.controller, sc.skill);
  EXPECT_FALSE(o.success);
  EXPECT_FALSE(o.failure.empty());
}

TEST(Skill, FunnelCompletenessCoarse) {
  const Scenario sc = default_scenario();
  for (double mag : {0.0, 0.5, 1.0, 2.5, 4.0}) {
    for (int deg = 0; deg < 360; deg += 15) {
      const SkillOutcome o = execute_skill(sc.scene, offset(sc.scene, mag, deg * std::numbers::pi / 180), sc.controller,
                                           sc.skill);
      EXPECT_TRUE(o.success) << mag << " mm at " << deg << " deg";
    }
  }
}

TEST(Skill, ReleasedSafetyAndTraceShape) {
  const Scenario sc = default_scenario();
  const double cap = sc.scene.friction().mu1 * sc.skill.f_z;
  for (int deg = 0; deg < 360; deg += 45) {
    const SkillOutcome o = execute_skill(sc.scene, offset(sc.scene, 3, deg * std::numbers::pi / 180), sc.controller,
                                         sc.skill);
    ASSERT_TRUE(o.success);
    EXPECT_LE(o.peak_force, cap + 1e-9);
    EXPECT_GT(o.peak_force, 0.5 * cap);
    EXPECT_TRUE(o.balance_consistent);
    EXPECT_LE(o.max_balance_residual, 1e-6);
    bool slipped = false;
    for (const auto& t : o.force_trace) {
      EXPECT_LE(t.wrench.planar_force(), cap + 1e-9);
      slipped = slipped || t.regime == MotionRegime::SlipOnObject;
    }
    EXPECT_TRUE(slipped);
    // Press settled before the first push and held within 5% afterwards.
    std::size_t first_move = 0;
    while (first_move < o.force_trace.size() && std::abs(o.force_trace[first_move].wrench.fz - 5) > 0.05) ++first_move;
    ASSERT_LT(first_move, o.force_trace.size());
    for (std::size_t i = first_move; i < o.force_trace.size(); ++i)
      EXPECT_NEAR(o.force_trace[i].wrench.fz, 5.0, 0.25);
  }
}

TEST(Skill, PerfectGroupTraceHasNoInPlaneForceWhileFree) {
  const Scenario sc = default_scenario();
  const SkillOutcome o = execute_skill(sc.scene, sc.scene.goal_pose(), sc.controller, sc.skill);
  for (const auto& t : o.force_trace)
    if (t.regime == MotionRegime::StickAdvance) {
      EXPECT_EQ(t.wrench.planar_force(), 0.0);
    }
}

TEST(Skill, RejectsUnseatedObject) {
  const Scenario sc = default_scenario();
  const SkillOutcome o = execute_skill(sc.scene, offset(sc.scene, 6, 0), sc.controller, sc.skill);
  EXPECT_FALSE(o.success);
  EXPECT_EQ(o.failure, "object_not_seated");
}

TEST(Skill, SafetyAbort) {
  const Scenario sc = default_scenario();
  SkillParams p = sc.skill;
  p.safety_force = 1.0;
  const SkillOutcome o = execute_skill(sc.scene, offset(sc.scene, 3, 0.3), sc.controller, p);
  EXPECT_FALSE(o.success);
  EXPECT_TRUE(o.aborted);
  EXPECT_EQ(o.failure, "safety_abort");
}
