#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saef/indicators.hpp"
#include "saef/qdta.hpp"

namespace saef {

/// Bad or incomplete scenario configuration, including missing input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a pipeline run needs. Relative paths in a config file are
/// resolved against the file's directory.
struct Scenario {
  std::filesystem::path nodes;
  std::filesystem::path links;
  std::filesystem::path parcels;
  std::filesystem::path schools;
  std::filesystem::path tracts;
  std::filesystem::path trips;
  std::vector<Objective> objectives{Objective::UET, Objective::SOT, Objective::SOF};
  std::filesystem::path output_dir = "out";
  SolverConfig solver;
  CostModel costs;
  TimeWindow morning = kMorningPeak;
  double adjacency_buffer_m = kDefaultAdjacencyBufferM;
  double school_radius_m = kSchoolRadiusM;

  /// Throws ConfigError on bad parameters or a missing input file.
  void validate() const;
};

/// Flat JSON object; unknown keys are rejected. Throws ConfigError.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir);

/// The default configuration as JSON, one key per line.
std::string default_config_json();

/// Pipeline steps. Each writes into scenario.output_dir (created if needed)
/// and reports progress and warnings on `log`.
void run_classify(const Scenario& s, std::ostream& log);
void run_assign(const Scenario& s, Objective obj, std::ostream& log);
void run_indicators(const Scenario& s, std::ostream& log);
void run_pipeline(const Scenario& s, std::ostream& log);

}  // namespace saef
