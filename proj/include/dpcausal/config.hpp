#pragma once

#include "dpcausal/generators.hpp"
#include "dpcausal/pipeline.hpp"
#include "dpcausal/types.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace dpcausal {

// A full run description: a data source (file or generator), the pipeline
// parameters, and output paths. Parsed from a flat key = value file; every
// key can also be overridden on the command line.
struct RunConfig {
  std::string data_path;  // CSV or JSON by extension; empty when generating
  std::optional<GeneratorKind> generator;
  Index generator_n = 0;
  bool rescale_covariates = false;
  PipelineConfig pipeline;
  std::string output_path;  // JSON report destination; empty for stdout only

  void check() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

// Applies one key = value pair; unknown keys are ConfigErrors.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// The resolved configuration, embedded in every report for reproducibility.
nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json report_to_json(const EstimateReport& report, const RunConfig& config);

// Budget report: {mu_total, mu_ate, mu_var, epsilon_at_delta_1e-5}.
nlohmann::json budget_report_json(double mu_total, double mu_ate, double mu_var);

Dataset load_run_data(const RunConfig& config);

}  // namespace dpcausal
