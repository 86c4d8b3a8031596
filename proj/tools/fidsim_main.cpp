#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fidsim/experiment.hpp"

namespace {

int run_command(const std::string& config_path,
                const std::string& output_override, int threads_override) {
  fidsim::ExperimentConfig config = fidsim::load_config_file(config_path);
  if (!output_override.empty()) config.output_path = output_override;
  if (threads_override > 0) config.threads = threads_override;

  const std::string csv = fidsim::run_to_csv(config);

  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + config.output_path);
  }
  out << csv;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing output file: " +
                             config.output_path);
  }

  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n' ? 1 : 0;
  std::cout << "wrote " << rows - 1 << " rows to " << config.output_path
            << "\n";
  return 0;
}

int validate_command(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config file: " << config_path << "\n";
    return 1;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& error) {
    std::cerr << "config parse failure: " << error.what() << "\n";
    return 1;
  }

  const fidsim::ConfigParseResult result = fidsim::try_parse_config(doc);
  if (!result.config) {
    for (const std::string& violation : result.violations) {
      std::cerr << "config error: " << violation << "\n";
    }
    return 1;
  }

  const fidsim::ExperimentConfig& config = *result.config;
  std::cout << fidsim::resolved_config(config).dump(2) << "\n";

  const auto p_values = fidsim::grid_p_values(config);
  const auto d_values = fidsim::grid_d_values(config);
  std::size_t feasible = 0;
  for (double p : p_values) {
    for (double d : d_values) {
      feasible += fidsim::grid_point_feasible(config, p, d) ? 1 : 0;
    }
  }
  const std::size_t points = p_values.size() * d_values.size();
  std::cout << "grid: " << points << " noise points, " << feasible
            << " feasible, " << points * config.protocols.size()
            << " rows before feasibility filtering\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch runner for entangled-pair fidelity estimation sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  int threads_override = 0;

  CLI::App* run = app.add_subcommand(
      "run", "Execute the configured sweep and write the CSV");
  run->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  run->add_option("--output", output_override,
                  "Override the configured output path");
  run->add_option("--threads", threads_override,
                  "Worker thread count (does not affect results)")
      ->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand(
      "validate", "Check a config and print it fully resolved");
  validate->add_option("config", config_path, "Experiment config (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(config_path, output_override, threads_override);
    }
    return validate_command(config_path);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
