// Command-line front end: run a scenario, list checks, or dump a model.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sslab/errors.hpp"
#include "sslab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Counterterm approximation laboratory"};
  app.require_subcommand(1);

  std::string run_path;
  std::string csv_override, json_override;
  auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
  run->add_option("config", run_path, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--csv", csv_override, "Override the CSV output path");
  run->add_option("--json", json_override, "Override the JSON summary path");

  app.add_subcommand("checks", "List the acceptance checks");

  std::string dump_path;
  auto* dump = app.add_subcommand("dump-model", "Print the model and counterterms as JSON");
  dump->add_option("config", dump_path, "JSON config file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("checks")) {
      std::cout << sslab::list_checks();
      return 0;
    }
    if (app.got_subcommand("dump-model")) {
      std::cout << sslab::dump_model(sslab::load_config(dump_path));
      return 0;
    }
    sslab::ExperimentConfig cfg = sslab::load_config(run_path);
    if (!csv_override.empty()) cfg.output.csv_path = csv_override;
    if (!json_override.empty()) cfg.output.json_path = json_override;
    const sslab::ScenarioResult result = sslab::run_scenario(cfg, sslab::worker_count_from_env());
    sslab::write_artifacts(result, cfg.output);
    for (const auto& rep : result.reports)
      for (const auto& v : rep.verdicts) std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << " (" << v.detail << ")\n";
    std::cout << "csv: " << cfg.output.csv_path << "\njson: " << cfg.output.json_path << "\n";
    return result.exit_code;
  } catch (const sslab::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
