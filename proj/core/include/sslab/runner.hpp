#pragma once

#include <string>
#include <vector>

#include "sslab/config.hpp"
#include "sslab/convergence_lab.hpp"

namespace sslab {

struct ScenarioResult {
  int exit_code = 0;  // 0 iff every verdict passes and no row failed
  std::vector<ConvergenceReport> reports;
  std::string csv;
  std::string json;
};

ScenarioResult run_scenario(const ExperimentConfig& config, int workers = 1);
// Writes the CSV and JSON artifacts to the configured paths.
void write_artifacts(const ScenarioResult& result, const OutputSection& output);

// Fixed CSV header.
const std::string& csv_header();
std::string format_csv(const std::vector<ConvergenceReport>& reports, int k);

struct CheckInfo {
  std::string id;
  std::string anchor;
  std::string description;
};
const std::vector<CheckInfo>& acceptance_checks();
std::string list_checks();

// JSON description of the model, limit moments and per-n counterterms.
std::string dump_model(const ExperimentConfig& config);

// Reads SSLAB_WORKERS; falls back to 1 on absent or invalid values.
int worker_count_from_env();

}  // namespace sslab
