#pragma once

// Experiment harness: seeded placement errors, single trials, campaigns over
// (method, group) cells, and CSV export of reports and force traces.

#include "pushskill/baselines.hpp"
#include "pushskill/rng.hpp"
#include "pushskill/scenario.hpp"
#include "pushskill/skill.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pushskill {

enum class Group { perfect, uncertainty };
enum class Method { push, spiral };

inline const char* to_string(Group g) { return g == Group::perfect ? "perfect" : "uncertainty"; }
inline const char* to_string(Method m) { return m == Method::push ? "push" : "spiral"; }

inline Group parse_group(const std::string& s) {
  if (s == "perfect") return Group::perfect;
  if (s == "uncertainty") return Group::uncertainty;
  throw std::invalid_argument("unknown group '" + s + "'");
}

inline Method parse_method(const std::string& s) {
  if (s == "push") return Method::push;
  if (s == "spiral") return Method::spiral;
  throw std::invalid_argument("unknown method '" + s + "'");
}

// Substream keys.
inline constexpr std::uint64_t kErrorStream = 0x45525230;   // "ERR0"
inline constexpr std::uint64_t kJitterStream = 0x4A495430;  // "JIT0"

inline std::uint64_t group_key(Group g, std::uint64_t purpose) {
  return purpose * 2 + (g == Group::uncertainty ? 1 : 0);
}

inline constexpr double kErrorMin = 2.0;  // mm
inline constexpr double kErrorMax = 4.0;  // mm

/// Injected placement error: zero for the perfect group, otherwise magnitude
/// uniform in [2, 4] mm along a uniform random direction.
inline Vec2 sample_error(std::uint64_t seed, Group group) {
  if (group == Group::perfect) return Vec2::Zero();
  SplitMix64 rng = SplitMix64::substream(seed, group_key(group, kErrorStream));
  const double magnitude = rng.uniform(kErrorMin, kErrorMax);
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return magnitude * Vec2(std::cos(angle), std::sin(angle));
}

/// Residual release offset from suction-cup deflection, present in both
/// groups: magnitude uniform in [0, max_offset], uniform direction.
inline Vec2 sample_jitter(std::uint64_t seed, Group group, double max_offset) {
  SplitMix64 rng = SplitMix64::substream(seed, group_key(group, kJitterStream));
  const double magnitude = rng.uniform(0.0, max_offset);
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return magnitude * Vec2(std::cos(angle), std::sin(angle));
}

struct TrialConfig {
  std::uint64_t seed = 0;
  Group group = Group::perfect;
  Method method = Method::push;
  std::string scene_id;
  Vec2 error = Vec2::Zero();
  Vec2 jitter = Vec2::Zero();
};

inline TrialConfig make_trial_config(std::uint64_t seed, Group group, Method method, const Scenario& s) {
  return {seed, group, method, s.id, sample_error(seed, group), sample_jitter(seed, group, s.placement_jitter)};
}

struct TrialResult {
  TrialConfig config;
  bool success = false;
  double final_error = 0.0;
  double peak_force = 0.0;
  int steps = 0;
  bool stuck = false;
  std::string failure;
  double max_balance_residual = 0.0;
  bool balance_consistent = true;
  std::vector<TraceSample> trace;  // kept only on request
  std::optional<std::string> trace_path;
};

inline TrialResult run_trial(const TrialConfig& c, const Scenario& s, bool keep_trace = false) {
  const Pose& goal = s.scene.goal_pose();
  const Pose start = goal.translated(c.error + c.jitter);
  SkillOutcome o = c.method == Method::push
                       ? execute_skill(s.scene, start, s.controller, s.skill)
                       : execute_spiral(s.scene, start, s.controller, s.spiral, s.skill.success_tol, s.skill.safety_force);
  TrialResult r;
  r.config = c;
  r.success = o.success;
  r.final_error = o.final_error;
  r.peak_force = o.peak_force;
  r.steps = o.steps;
  r.stuck = o.stuck;
  r.failure = o.failure;
  r.max_balance_residual = o.max_balance_residual;
  r.balance_consistent = o.balance_consistent;
  if (keep_trace) r.trace = std::move(o.force_trace);
  return r;
}

struct CellSummary {
  Method method = Method::push;
  Group group = Group::perfect;
  int trials = 0;
  int successes = 0;
  int stuck_failures = 0;
  double mean_final_error = 0.0;
  double mean_peak_force = 0.0;
  double max_peak_force = 0.0;
};

struct CampaignReport {
  std::vector<CellSummary> cells;
  std::vector<TrialResult> trials;

  const CellSummary& cell(Method m, Group g) const {
    for (const auto& c : cells)
      if (c.method == m && c.group == g) return c;
    throw std::out_of_range("CampaignReport: no such cell");
  }
};

inline void export_trace(const std::vector<TraceSample>& trace, const std::filesystem::path& path);

/// Runs seeds base_seed .. base_seed + trials - 1 in every (method, group) cell.
/// With `trace_dir`, each trial's force trace is written there.
inline CampaignReport run_campaign(const Scenario& s, const std::vector<Method>& methods,
                                   const std::vector<Group>& groups, int trials_per_cell, std::uint64_t base_seed,
                                   const std::optional<std::filesystem::path>& trace_dir = std::nullopt) {
  if (trials_per_cell <= 0) throw std::invalid_argument("run_campaign: trials_per_cell must be positive");
  CampaignReport report;
  for (Method m : methods) {
    for (Group g : groups) {
      CellSummary cell{m, g};
      for (int i = 0; i < trials_per_cell; ++i) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
        TrialResult r = run_trial(make_trial_config(seed, g, m, s), s, trace_dir.has_value());
        if (trace_dir) {
          const auto path = *trace_dir / (std::string(to_string(m)) + "_" + to_string(g) + "_" + std::to_string(seed) + ".csv");
          export_trace(r.trace, path);
          r.trace_path = path.string();
          r.trace.clear();
          r.trace.shrink_to_fit();
        }
        ++cell.trials;
        cell.successes += r.success ? 1 : 0;
        cell.stuck_failures += (!r.success && r.stuck) ? 1 : 0;
        cell.mean_final_error += r.final_error;
        cell.mean_peak_force += r.peak_force;
        cell.max_peak_force = std::max(cell.max_peak_force, r.peak_force);
        report.trials.push_back(std::move(r));
      }
      cell.mean_final_error /= cell.trials;
      cell.mean_peak_force /= cell.trials;
      report.cells.push_back(cell);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest decimal text that round-trips the double exactly.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline constexpr double kPhaseForceThreshold = 0.1;  // N
inline constexpr int kPhaseHoldSteps = 5;

/// Splits a trace into alternating free/contact phases. A boundary is a
/// crossing of the in-plane force magnitude over 0.1 N that holds for at
/// least 5 samples. The last phase is labelled as the residual phase.
inline std::vector<std::string> label_phases(const std::vector<TraceSample>& trace) {
  const std::size_t n = trace.size();
  std::vector<int> phase(n, 0);
  std::vector<bool> contact_of_phase;
  if (n == 0) return {};

  auto in_contact = [&](std::size_t i) { return trace[i].wrench.planar_force() > kPhaseForceThreshold; };
  bool state = in_contact(0);
  contact_of_phase.push_back(state);
  int current = 0;
  std::size_t i = 0;
  while (i < n) {
    if (in_contact(i) != state) {
      std::size_t j = i;
      while (j < n && in_contact(j) != state && j - i < kPhaseHoldSteps) ++j;
      if (j - i >= kPhaseHoldSteps) {
        state = !state;
        ++current;
        contact_of_phase.push_back(state);
      }
      // Samples of a rejected blip stay in the current phase.
      for (std::size_t k = i; k < j; ++k) phase[k] = current;
      i = j;
      continue;
    }
    phase[i] = current;
    ++i;
  }

  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int p = phase[k];
    std::string kind = p == current ? "residual" : (contact_of_phase[p] ? "contact" : "free");
    labels[k] = "p" + std::to_string(p) + "_" + kind;
  }
  return labels;
}

inline void write_trace_csv(const std::vector<TraceSample>& trace, std::ostream& out) {
  out << "step,fx,fy,fz,mx,my,mz,regime,phase_label\n";
  const auto labels = label_phases(trace);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    const Wrench& w = s.wrench;
    out << s.step << ',' << format_number(w.fx) << ',' << format_number(w.fy) << ',' << format_number(w.fz) << ','
        << format_number(w.mx) << ',' << format_number(w.my) << ',' << format_number(w.mz) << ','
        << to_string(s.regime) << ',' << labels[i] << '\n';
  }
}

inline void export_trace(const std::vector<TraceSample>& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_trace: cannot open " + path.string());
  write_trace_csv(trace, out);
  if (!out) throw std::runtime_error("export_trace: write failed for " + path.string());
}

inline void write_report_csv(const CampaignReport& r, std::ostream& out) {
  out << "method,group,trials,successes,success_rate,stuck_failures,mean_final_error_mm,mean_peak_force_n,"
         "max_peak_force_n\n";
  for (const auto& c : r.cells) {
    out << to_string(c.method) << ',' << to_string(c.group) << ',' << c.trials << ',' << c.successes << ','
        << format_number(static_cast<double>(c.successes) / c.trials) << ',' << c.stuck_failures << ','
        << format_number(c.mean_final_error) << ',' << format_number(c.mean_peak_force) << ','
        << format_number(c.max_peak_force) << '\n';
  }
}

inline void write_trials_csv(const CampaignReport& r, std::ostream& out) {
  out << "method,group,seed,scene_id,error_x_mm,error_y_mm,jitter_x_mm,jitter_y_mm,success,final_error_mm,"
         "peak_force_n,steps,stuck,failure,trace_path\n";
  for (const auto& t : r.trials) {
    const auto& c = t.config;
    out << to_string(c.method) << ',' << to_string(c.group) << ',' << c.seed << ',' << c.scene_id << ','
        << format_number(c.error.x()) << ',' << format_number(c.error.y()) << ',' << format_number(c.jitter.x())
        << ',' << format_number(c.jitter.y()) << ',' << (t.success ? 1 : 0) << ',' << format_number(t.final_error)
        << ',' << format_number(t.peak_force) << ',' << t.steps << ',' << (t.stuck ? 1 : 0) << ',' << t.failure
        << ',' << t.trace_path.value_or("") << '\n';
  }
}

}  // namespace pushskill
