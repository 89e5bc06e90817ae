#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sslab/convergence_lab.hpp"
#include "sslab/spectral_model.hpp"

namespace sslab {

struct LadderSection {
  std::vector<int> n_values{4, 16, 64};
  std::vector<double> t_values{1.0};
  std::vector<double> lambda_values{1.0, 2.0};
  std::vector<LadderKind> kinds{LadderKind::Schrodinger};
  int random_probes = 3;
  std::optional<double> lambda0;
  // Extra audits: signature, projection, product, intertwining, m0_reduction.
  std::vector<std::string> checks{"signature"};
};

struct OutputSection {
  std::string csv_path = "sslab_rows.csv";
  std::string json_path = "sslab_summary.json";
};

struct ExperimentConfig {
  ModelConfig model;
  FamilySpec family;
  LadderSection ladder;
  OutputSection output;
  std::uint64_t seed = 7;
  int k() const;  // resolved singularity order
};

// JSON document. Unknown and duplicate keys are rejected; parse errors carry
// line and column, semantic errors name the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

}  // namespace sslab
