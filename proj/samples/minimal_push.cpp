// Runs the pushing skill once on the built-in holder with a 3 mm placement
// error and prints the outcome.

#include "pushskill/harness.hpp"

#include <cmath>
#include <iostream>

int main() {
  using namespace pushskill;
  const Scenario s = default_scenario();
  const Pose start = s.scene.goal_pose().translated(3.0 * Vec2(std::cos(0.7), std::sin(0.7)));

  const SkillOutcome o = execute_skill(s.scene, start, s.controller, s.skill);
  std::cout << (o.success ? "success" : "failure") << "  final error " << o.final_error << " mm"
            << "  peak in-plane force " << o.peak_force << " N"
            << "  steps " << o.steps << '\n';
  return o.success ? 0 : 1;
}
