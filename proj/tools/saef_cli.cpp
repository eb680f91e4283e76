// Command-line front end: classify, assign, indicators, run, chart, compare.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saef/chart.hpp"
#include "saef/csv.hpp"
#include "saef/scenario.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

saef::Scenario scenario_from(const std::string& config, const std::string& out) {
  if (config.empty()) throw saef::ConfigError("--config is required");
  saef::Scenario s = saef::load_scenario(config);
  if (!out.empty()) s.output_dir = out;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic assignment under three routing objectives, scored with socially aware indicators."};
  app.require_subcommand(0, 1);

  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the default scenario configuration and exit");

  std::string config, out;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Scenario JSON file")->required();
    cmd->add_option("--out", out, "Output directory (overrides output_dir)");
  };

  auto* classify = app.add_subcommand("classify", "Write link_types.csv");
  add_common(classify);

  std::string objective;
  auto* assign = app.add_subcommand("assign", "Run the day-long assignment for one objective");
  add_common(assign);
  assign->add_option("--objective", objective, "uet, sot or sof")->required();

  auto* indicators = app.add_subcommand("indicators", "Compute indicators from existing assignment outputs");
  add_common(indicators);

  auto* run = app.add_subcommand("run", "Full pipeline: classify, assign every objective, indicators, chart");
  add_common(run);

  std::string chart_in, chart_out;
  auto* chart = app.add_subcommand("chart", "Render a comparison table as an SVG bar chart");
  chart->add_option("--input", chart_in, "comparison.csv")->required();
  chart->add_option("--output", chart_out, "SVG path")->required();

  std::vector<std::string> tables;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Join comparison tables of several cities");
  compare->add_option("tables", tables, "[label=]comparison.csv, at least two")->required();
  compare->add_option("--output", compare_out, "Output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_config) {
      std::cout << saef::default_config_json();
      return 0;
    }
    if (*classify) {
      saef::run_classify(scenario_from(config, out), std::cerr);
    } else if (*assign) {
      saef::Objective obj;
      try {
        obj = saef::parse_objective(objective);
      } catch (const std::invalid_argument& e) {
        throw saef::ConfigError(e.what());
      }
      saef::run_assign(scenario_from(config, out), obj, std::cerr);
    } else if (*indicators) {
      saef::run_indicators(scenario_from(config, out), std::cerr);
    } else if (*run) {
      saef::run_pipeline(scenario_from(config, out), std::cerr);
    } else if (*chart) {
      saef::emit_chart(saef::read_comparison(chart_in), chart_out);
    } else if (*compare) {
      std::vector<std::pair<std::string, saef::ComparisonTable>> cities;
      for (const std::string& arg : tables) {
        const auto eq = arg.find('=');
        const std::filesystem::path path = eq == std::string::npos ? arg : arg.substr(eq + 1);
        std::string label = eq == std::string::npos ? path.parent_path().filename().string() : arg.substr(0, eq);
        if (label.empty()) label = path.stem().string();
        cities.emplace_back(label, saef::read_comparison(path));
      }
      const saef::ComparisonTable joined = saef::compare_cities(cities);
      saef::write_comparison(joined, compare_out);
    } else {
      std::cerr << app.help();
      return kExitBadInput;
    }
  } catch (const saef::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const saef::LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
