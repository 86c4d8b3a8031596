#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fidsim/evaluation.hpp"
#include "fidsim/protocol.hpp"

namespace fidsim {

enum class NoiseKind { Iid, Correlated };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Iid;
  double p = 0.0;
  double d = 0.0;  // correlated only
};

struct ExperimentConfig {
  std::size_t n_pairs = 0;
  std::size_t m_sampled = 0;
  NoiseSpec noise;
  std::vector<ProtocolKind> protocols = {ProtocolKind::Proposed};
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::vector<double> sweep_p;  // empty: single point at noise.p
  std::vector<double> sweep_d;  // empty: single point at noise.d
  std::string output_path = "results.csv";
  int threads = 1;
};

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> violations;
};

/// Parses and validates in one pass, reporting every violation at once.
ConfigParseResult try_parse_config(const nlohmann::json& doc);

/// Throws std::invalid_argument listing all violations.
ExperimentConfig parse_config(const nlohmann::json& doc);

ExperimentConfig load_config_file(const std::string& path);

/// The fully resolved configuration with defaults filled in.
nlohmann::json resolved_config(const ExperimentConfig& config);

/// Effective sweep grids: the p values, and the d values (a single zero
/// for i.i.d. noise).
std::vector<double> grid_p_values(const ExperimentConfig& config);
std::vector<double> grid_d_values(const ExperimentConfig& config);

/// True if the (p, d) point yields valid channel error probabilities.
bool grid_point_feasible(const ExperimentConfig& config, double p, double d);

inline const char* csv_header() {
  return "p,d,protocol,n_pairs,m_sampled,trials,seed,mse,mse_stderr,bias,"
         "bias_stderr,analytic_bound,measurement_error,sampling_error";
}

/// Runs the full (p, d, protocol) grid and returns the CSV document
/// (header row first, LF line endings, 17 significant digits). Infeasible
/// grid points are skipped; each grid row derives its RNG base from
/// (seed, flat grid index), so output is byte-identical for a given
/// (config, seed) and independent of the thread count.
std::string run_to_csv(const ExperimentConfig& config);

}  // namespace fidsim
