#include "pushskill/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace pushskill;

namespace {

std::filesystem::path source_dir() { return std::filesystem::path(PUSHSKILL_SOURCE_DIR); }

TraceSample sample(int step, double fx) { return {step, Wrench{fx, 0, 5, 0, 0, 0}, MotionRegime::StickAdvance}; }

}  // namespace

TEST(Rng, SplitMixReferenceValues) {
  // Published outputs for seed 1234567.
  SplitMix64 g(1234567);
  EXPECT_EQ(g.next(), 6457827717110365317ULL);
  EXPECT_EQ(g.next(), 3203168211198807973ULL);
  EXPECT_EQ(g.next(), 9817491932198370423ULL);
}

TEST(Rng, UniformRange) {
  SplitMix64 g(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = g.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(SplitMix64::substream(1, 2).next(), SplitMix64::substream(1, 3).next());
  EXPECT_NE(SplitMix64::substream(1, 2).next(), SplitMix64::substream(2, 2).next());
}

TEST(SampleError, PerfectIsZero) {
  for (std::uint64_t s = 0; s < 100; ++s) EXPECT_TRUE(sample_error(s, Group::perfect).isZero());
}

TEST(SampleError, UncertaintyBounds) {
  const double m = sample_error(42, Group::uncertainty).norm();
  EXPECT_GE(m, 2.0);
  EXPECT_LE(m, 4.0);
  EXPECT_EQ(sample_error(42, Group::uncertainty), sample_error(42, Group::uncertainty));
}

TEST(SampleError, MagnitudeAndDirectionUniform) {
  const int n = 10000;
  std::array<int, 10> mag{}, dir{};
  for (int s = 0; s < n; ++s) {
    const Vec2 e = sample_error(static_cast<std::uint64_t>(s), Group::uncertainty);
    const double m = e.norm();
    ASSERT_GE(m, 2.0);
    ASSERT_LE(m, 4.0);
    mag[std::min(9, static_cast<int>((m - 2.0) / 0.2))]++;
    double a = std::atan2(e.y(), e.x());
    if (a < 0) a += 2 * std::numbers::pi;
    dir[std::min(9, static_cast<int>(a / (0.2 * std::numbers::pi)))]++;
  }
  // Binomial(n, 0.1): mean 1000, sigma 30.
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(mag[k], 1000, 90) << "magnitude decile " << k;
    EXPECT_NEAR(dir[k], 1000, 90) << "direction decile " << k;
  }
}

TEST(SampleJitter, Bounded) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    EXPECT_LE(sample_jitter(s, Group::perfect, 1.0).norm(), 1.0);
    EXPECT_TRUE(sample_jitter(s, Group::perfect, 0.0).isZero());
  }
}

TEST(Groups, Parse) {
  EXPECT_EQ(parse_group("perfect"), Group::perfect);
  EXPECT_EQ(parse_method("spiral"), Method::spiral);
  EXPECT_THROW(parse_group("bogus"), std::invalid_argument);
  EXPECT_THROW(parse_method("bogus"), std::invalid_argument);
}

TEST(Trial, PushSucceedsInBothGroups) {
  const Scenario s = default_scenario();
  for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    for (Group g : {Group::perfect, Group::uncertainty}) {
      const TrialResult r = run_trial(make_trial_config(seed, g, Method::push, s), s);
      EXPECT_TRUE(r.success) << seed;
      EXPECT_LE(r.final_error, 0.2);
      EXPECT_TRUE(r.trace.empty());
    }
  }
}

TEST(Trial, SpiralCornerSeedFails) {
  const Scenario s = default_scenario();
  TrialConfig c = make_trial_config(3, Group::uncertainty, Method::spiral, s);
  c.error = 3.5 * Vec2(-1, 1).normalized();
  c.jitter = Vec2::Zero();
  const TrialResult r = run_trial(c, s, true);
  EXPECT_FALSE(r.success);
  EXPECT_TRUE(r.stuck);
  EXPECT_FALSE(r.trace.empty());
}

TEST(Campaign, RejectsEmptyCells) {
  EXPECT_THROW(run_campaign(default_scenario(), {Method::push}, {Group::perfect}, 0, 1), std::invalid_argument);
}

TEST(Campaign, ConsistencyAndDeterminism) {
  const Scenario s = default_scenario();
  const auto a = run_campaign(s, {Method::push, Method::spiral}, {Group::perfect, Group::uncertainty}, 12, 100);
  const auto b = run_campaign(s, {Method::push, Method::spiral}, {Group::perfect, Group::uncertainty}, 12, 100);
  ASSERT_EQ(a.cells.size(), 4u);
  ASSERT_EQ(a.trials.size(), 48u);
  for (const auto& c : a.cells) {
    int count = 0;
    for (const auto& t : a.trials)
      if (t.config.method == c.method && t.config.group == c.group) count += t.success ? 1 : 0;
    EXPECT_EQ(count, c.successes);
    EXPECT_LE(c.successes, c.trials);
    EXPECT_EQ(c.trials, 12);
  }
  std::ostringstream ra, rb;
  write_report_csv(a, ra);
  write_report_csv(b, rb);
  EXPECT_EQ(ra.str(), rb.str());
  EXPECT_EQ(a.cell(Method::push, Group::uncertainty).successes, 12);
  EXPECT_GE(a.cell(Method::spiral, Group::uncertainty).max_peak_force,
            a.cell(Method::push, Group::uncertainty).max_peak_force);
}

TEST(Campaign, CellsDoNotInteract) {
  const Scenario s = default_scenario();
  const auto both = run_campaign(s, {Method::push, Method::spiral}, {Group::uncertainty}, 8, 5);
  const auto only = run_campaign(s, {Method::spiral}, {Group::uncertainty}, 8, 5);
  for (int i = 0; i < 8; ++i) {
    const auto& x = both.trials[8 + i];
    const auto& y = only.trials[i];
    EXPECT_EQ(x.config.error, y.config.error);
    EXPECT_EQ(x.success, y.success);
    EXPECT_EQ(x.final_error, y.final_error);
  }
}

TEST(Campaign, WritesTraces) {
  const auto dir = std::filesystem::temp_directory_path() / "pushskill_trace_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto r = run_campaign(default_scenario(), {Method::push}, {Group::uncertainty}, 2, 9, dir);
  for (const auto& t : r.trials) {
    ASSERT_TRUE(t.trace_path.has_value());
    EXPECT_TRUE(std::filesystem::exists(*t.trace_path));
    EXPECT_TRUE(t.trace.empty());
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "push_uncertainty_9.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Csv, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789, 0.0}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(Csv, EmptyTraceIsHeaderOnly) {
  std::ostringstream out;
  write_trace_csv({}, out);
  EXPECT_EQ(out.str(), "step,fx,fy,fz,mx,my,mz,regime,phase_label\n");
}

TEST(Csv, ExportTraceReportsBadPath) {
  EXPECT_THROW(export_trace({}, "/nonexistent_dir_xyz/trace.csv"), std::runtime_error);
}

TEST(Phases, Segmentation) {
  std::vector<TraceSample> t;
  int step = 0;
  for (int i = 0; i < 10; ++i) t.push_back(sample(step++, 0.0));
  for (int i = 0; i < 8; ++i) t.push_back(sample(step++, 3.0));
  for (int i = 0; i < 3; ++i) t.push_back(sample(step++, 0.0));  // blip, too short
  for (int i = 0; i < 6; ++i) t.push_back(sample(step++, 3.0));
  for (int i = 0; i < 10; ++i) t.push_back(sample(step++, 0.0));
  for (int i = 0; i < 7; ++i) t.push_back(sample(step++, 1.0));
  const auto labels = label_phases(t);
  ASSERT_EQ(labels.size(), t.size());
  EXPECT_EQ(labels[0], "p0_free");
  EXPECT_EQ(labels[10], "p1_contact");
  EXPECT_EQ(labels[19], "p1_contact");
  EXPECT_EQ(labels[26], "p1_contact");
  EXPECT_EQ(labels[27], "p2_free");
  EXPECT_EQ(labels.back(), "p3_residual");
}

TEST(Phases, PushTraceAnatomy) {
  const Scenario s = default_scenario();
  TrialConfig c = make_trial_config(4, Group::uncertainty, Method::push, s);
  const TrialResult r = run_trial(c, s, true);
  ASSERT_TRUE(r.success);
  const auto labels = label_phases(r.trace);
  bool contact = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].find("contact") != std::string::npos) {
      contact = true;
      EXPECT_LE(r.trace[i].wrench.planar_force(), 0.8 * 5 + 1e-9);
    }
    if (labels[i].find("free") != std::string::npos) {
      EXPECT_LT(r.trace[i].wrench.planar_force(), 4.0 + 1e-9);
    }
  }
  EXPECT_TRUE(contact);
  EXPECT_NE(labels.back().find("residual"), std::string::npos);
}

TEST(Scenario, FileMatchesBuiltin) {
  const Scenario file = load_scenario((source_dir() / "scenarios" / "holder_a.json").string());
  const Scenario builtin = default_scenario();
  EXPECT_EQ(file.id, "holder_a");
  nlohmann::json a = scenario_to_json(file);
  nlohmann::json b = scenario_to_json(builtin);
  EXPECT_EQ(a, b);
  EXPECT_LT(file.scene.clearance(), 2.0);
}

TEST(Scenario, RoundTrip) {
  const Scenario s = default_scenario();
  const Scenario back = scenario_from_json(scenario_to_json(s));
  EXPECT_EQ(scenario_to_json(back), scenario_to_json(s));
}

TEST(Scenario, Errors) {
  nlohmann::json j = scenario_to_json(default_scenario());
  EXPECT_THROW(load_scenario("/nonexistent/holder.json"), std::runtime_error);

  auto broken = j;
  broken["scene"]["clearance_mm"] = 0.5;
  EXPECT_THROW(scenario_from_json(broken), std::runtime_error);
  broken = j;
  broken.erase("friction");
  EXPECT_THROW(scenario_from_json(broken), std::runtime_error);
  broken = j;
  broken["friction"]["mu2"] = 0.9;
  EXPECT_THROW(scenario_from_json(broken), std::runtime_error);
  broken = j;
  broken["controller"]["p_gain"] = 0.0;
  EXPECT_THROW(scenario_from_json(broken), std::runtime_error);
  broken = j;
  broken["spiral"]["step_len_mm"] = 0.5;
  EXPECT_THROW(scenario_from_json(broken), std::runtime_error);
  broken = j;
  broken["scene"]["fixtures"][0]["normal"] = {1, 1};
  EXPECT_THROW(scenario_from_json(broken), std::runtime_error);
}
