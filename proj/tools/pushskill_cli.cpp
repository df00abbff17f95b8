// Command-line front end: campaigns, single traces and search-path export.

#include "pushskill/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace ps = pushskill;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

ps::TrajectoryKind trajectory_for(const std::string& kind, const ps::Scenario& s) {
  if (kind == "linear") return ps::LinearTrajectory{};
  if (kind == "zigzag") return ps::ZigzagTrajectory{};
  if (kind == "spiral") return s.spiral;
  if (kind == "sinus") return ps::SinusTrajectory{};
  if (kind == "lissajous") return ps::LissajousTrajectory{};
  throw std::invalid_argument("unknown path kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pushing-skill assembly simulator and benchmark"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string method = "push";
  std::string group = "perfect";
  int trials = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string traces;
  std::string kind;

  auto* run = app.add_subcommand("run", "Run a campaign and write the summary report");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--method", method, "push|spiral (comma list allowed)")->required();
  run->add_option("--group", group, "perfect|uncertainty (comma list allowed)")->required();
  run->add_option("--trials", trials, "Trials per cell")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--out", out, "Report CSV")->required();
  run->add_option("--traces", traces, "Directory for per-trial traces and trials.csv");

  auto* trace = app.add_subcommand("trace", "Run one trial and write its force trace");
  trace->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  trace->add_option("--method", method, "push|spiral")->required();
  trace->add_option("--group", group, "perfect|uncertainty")->required();
  trace->add_option("--seed", seed, "Trial seed");
  trace->add_option("--out", out, "Trace CSV")->required();

  auto* paths = app.add_subcommand("paths", "Export a search trajectory");
  paths->add_option("--kind", kind, "linear|zigzag|spiral|sinus|lissajous")
      ->required()
      ->check(CLI::IsMember({"linear", "zigzag", "spiral", "sinus", "lissajous"}));
  paths->add_option("--scenario", scenario_path, "Scenario supplying spiral parameters")->check(CLI::ExistingFile);
  paths->add_option("--out", out, "Path CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ps::Scenario s = ps::load_scenario(scenario_path);
      std::vector<ps::Method> methods;
      std::vector<ps::Group> groups;
      for (const auto& m : split_list(method)) methods.push_back(ps::parse_method(m));
      for (const auto& g : split_list(group)) groups.push_back(ps::parse_group(g));
      std::optional<std::filesystem::path> trace_dir;
      if (!traces.empty()) {
        std::filesystem::create_directories(traces);
        trace_dir = traces;
      }
      const auto report = ps::run_campaign(s, methods, groups, trials, seed, trace_dir);
      std::ostringstream csv;
      ps::write_report_csv(report, csv);
      write_file(out, csv.str());
      if (trace_dir) {
        std::ostringstream tcsv;
        ps::write_trials_csv(report, tcsv);
        write_file((*trace_dir / "trials.csv").string(), tcsv.str());
      }
      for (const auto& c : report.cells)
        std::cout << ps::to_string(c.method) << '/' << ps::to_string(c.group) << ": " << c.successes << '/'
                  << c.trials << " (stuck " << c.stuck_failures << ")\n";
    } else if (*trace) {
      const ps::Scenario s = ps::load_scenario(scenario_path);
      const auto cfg = ps::make_trial_config(seed, ps::parse_group(group), ps::parse_method(method), s);
      const auto result = ps::run_trial(cfg, s, /*keep_trace=*/true);
      ps::export_trace(result.trace, out);
      std::cout << (result.success ? "success" : "failure") << " final_error_mm=" << ps::format_number(result.final_error)
                << " peak_force_n=" << ps::format_number(result.peak_force) << '\n';
    } else if (*paths) {
      const ps::Scenario s = scenario_path.empty() ? ps::default_scenario() : ps::load_scenario(scenario_path);
      const ps::Path p = ps::generate_trajectory(trajectory_for(kind, s));
      std::ostringstream csv;
      csv << "index,x_mm,y_mm\n";
      for (std::size_t i = 0; i < p.size(); ++i)
        csv << i << ',' << ps::format_number(p[i].x()) << ',' << ps::format_number(p[i].y()) << '\n';
      write_file(out, csv.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
