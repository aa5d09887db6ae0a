#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "effbasis/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"effbasis: separable-pair ground-state solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir = "results";
  int jobs = 1;
  bool verbose = false;

  CLI::App* run_cmd = app.add_subcommand("run", "execute an experiment");
  run_cmd->add_option("--config", config_path, "experiment JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--output", output_dir, "report directory");
  run_cmd->add_option("--jobs", jobs, "parallel method cells")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--verbose", verbose, "echo rows as they complete");

  std::string res_config;
  CLI::App* res_cmd =
      app.add_subcommand("resources", "static circuit-cost report");
  res_cmd->add_option("--config", res_config, "experiment JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      effbasis::cli::ExperimentConfig cfg =
          effbasis::cli::load_experiment(config_path);
      std::vector<effbasis::cli::ResultRow> rows =
          effbasis::cli::run(cfg, output_dir, jobs);
      if (verbose)
        std::fputs(
            effbasis::cli::format_results_csv(rows, cfg.csv_precision).c_str(),
            stdout);
      std::printf("wrote %zu rows to %s\n", rows.size(), output_dir.c_str());
    } else if (res_cmd->parsed()) {
      effbasis::cli::ExperimentConfig cfg =
          effbasis::cli::load_experiment(res_config);
      std::vector<effbasis::cli::ResourceRow> rows =
          effbasis::cli::report_resources(cfg);
      std::fputs(effbasis::cli::format_resources_csv(rows).c_str(), stdout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
