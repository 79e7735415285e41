#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "minkdim/core.hpp"
#include "minkdim/neighborhood.hpp"

namespace minkdim::cli {

/// Bad or incomplete configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kKinds[] = {"sequence",           "saddle-bundle", "semihyp-bundle",
                                         "focus-spiral",       "limit-cycle-spiral",
                                         "saddle-loop",        "two-cycle",     "cyclicity"};

struct LadderConfig {
  double delta_min = 0.0;
  double delta_max = 0.0;
  std::size_t count = 0;
};

struct OutputPaths {
  std::string samples = "samples.csv";
  std::string plot = "plot.csv";
  std::string result = "result.json";
};

struct ScenarioConfig {
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  LadderConfig ladder;
  std::uint64_t cell_cap = kDefaultCellCap;
  OutputPaths outputs;
  /// Where the document came from and which key=value overrides were applied.
  std::string source;
  std::vector<std::string> overrides;
};

/// Sets a dotted key (`params.alpha=0.5`) in a config document. The value is
/// parsed as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates kind, ladder, grid and outputs; kind-specific params are checked
/// when the scenario runs.
ScenarioConfig parse_config(const nlohmann::json& doc);

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

struct ResultRecord {
  std::string kind;
  std::optional<DimensionEstimate> estimate;
  std::optional<double> prediction;
  bool integer_prediction = false;
  std::optional<double> abs_error;
  std::vector<std::string> warnings;
  double timing_seconds = 0.0;
  /// Kind-specific quantities (spiral dimensions, reports, counts).
  nlohmann::json extra = nlohmann::json::object();
  nlohmann::json provenance = nlohmann::json::object();
};

nlohmann::json to_json(const ResultRecord& record);

struct ScenarioOutcome {
  ResultRecord record;
  std::vector<NeighborhoodMeasurement> samples;
  int ambient = 1;
};

/// Runs the pipeline in memory. Throws ConfigError for bad params and
/// minkdim::Error (message prefixed with the stage) for pipeline failures.
ScenarioOutcome execute(const ScenarioConfig& config);

/// execute() followed by writing the outputs into out_dir. Every file is
/// written to a temporary name and renamed; on failure nothing is left behind.
ResultRecord run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// `delta,measure` table, 17 significant digits, rows in descending delta.
void emit_samples(std::span<const NeighborhoodMeasurement> samples,
                  const std::filesystem::path& path);

/// Sample table plus a pointwise-dimension column.
void emit_plot(std::span<const NeighborhoodMeasurement> samples, int ambient,
               const std::filesystem::path& path);

std::vector<NeighborhoodMeasurement> read_samples(const std::filesystem::path& path);

}  // namespace minkdim::cli
