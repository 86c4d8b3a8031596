#include "fidsim/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fidsim {

namespace {

using nlohmann::json;

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

bool parse_protocol_name(const std::string& name, ProtocolKind& kind) {
  if (name == "proposed") {
    kind = ProtocolKind::Proposed;
  } else if (name == "clustered_basis") {
    kind = ProtocolKind::ClusteredBasis;
  } else if (name == "per_basis_dfe") {
    kind = ProtocolKind::PerBasisDfe;
  } else {
    return false;
  }
  return true;
}

void check_known_keys(const json& object, const std::string& scope,
                      const std::set<std::string>& known,
                      std::vector<std::string>& violations) {
  for (const auto& item : object.items()) {
    if (!known.count(item.key())) {
      violations.push_back(scope + ": unknown field '" + item.key() + "'");
    }
  }
}

bool get_unsigned(const json& doc, const std::string& key,
                  std::uint64_t& out, std::vector<std::string>& violations) {
  if (!doc.contains(key)) return false;
  const json& value = doc.at(key);
  if (!value.is_number_integer() || (value.is_number_integer() &&
                                     value.get<std::int64_t>() < 0 &&
                                     !value.is_number_unsigned())) {
    violations.push_back(key + ": must be a nonnegative integer");
    return false;
  }
  out = value.get<std::uint64_t>();
  return true;
}

bool get_probability(const json& doc, const std::string& key, double& out,
                     std::vector<std::string>& violations,
                     const std::string& scope) {
  if (!doc.contains(key)) return false;
  const json& value = doc.at(key);
  if (!value.is_number()) {
    violations.push_back(scope + key + ": must be a number");
    return false;
  }
  out = value.get<double>();
  if (!(out >= 0.0 && out <= 1.0)) {
    violations.push_back(scope + key + ": must lie in [0, 1]");
    return false;
  }
  return true;
}

}  // namespace

ConfigParseResult try_parse_config(const json& doc) {
  ConfigParseResult result;
  auto& violations = result.violations;
  ExperimentConfig config;

  if (!doc.is_object()) {
    violations.push_back("config: document must be a JSON object");
    return result;
  }
  check_known_keys(doc, "config",
                   {"n_pairs", "m_sampled", "noise", "protocols", "trials",
                    "seed", "sweep", "output_path", "threads"},
                   violations);

  std::uint64_t n_pairs = 0;
  if (get_unsigned(doc, "n_pairs", n_pairs, violations)) {
    if (n_pairs < 2) {
      violations.push_back("n_pairs: must be at least 2");
    }
    config.n_pairs = static_cast<std::size_t>(n_pairs);
  } else if (!doc.contains("n_pairs")) {
    violations.push_back("n_pairs: required field is missing");
  }

  std::uint64_t m_sampled = 0;
  if (get_unsigned(doc, "m_sampled", m_sampled, violations)) {
    config.m_sampled = static_cast<std::size_t>(m_sampled);
    if (m_sampled < 1) {
      violations.push_back("m_sampled: must be at least 1");
    } else if (config.n_pairs > 0 && config.m_sampled >= config.n_pairs) {
      violations.push_back("m_sampled: must be less than n_pairs");
    }
  } else if (!doc.contains("m_sampled")) {
    violations.push_back("m_sampled: required field is missing");
  }

  bool correlated = false;
  if (!doc.contains("noise") || !doc.at("noise").is_object()) {
    violations.push_back("noise: required object is missing");
  } else {
    const json& noise = doc.at("noise");
    check_known_keys(noise, "noise", {"kind", "p", "d"}, violations);
    if (!noise.contains("kind") || !noise.at("kind").is_string()) {
      violations.push_back("noise.kind: must be 'iid' or 'correlated'");
    } else {
      const std::string kind = noise.at("kind").get<std::string>();
      if (kind == "iid") {
        config.noise.kind = NoiseKind::Iid;
      } else if (kind == "correlated") {
        config.noise.kind = NoiseKind::Correlated;
        correlated = true;
      } else {
        violations.push_back("noise.kind: must be 'iid' or 'correlated'");
      }
    }
    if (!get_probability(noise, "p", config.noise.p, violations, "noise.") &&
        !noise.contains("p")) {
      violations.push_back("noise.p: required field is missing");
    }
    if (noise.contains("d")) {
      if (!correlated) {
        violations.push_back("noise.d: only valid for correlated noise");
      } else {
        get_probability(noise, "d", config.noise.d, violations, "noise.");
      }
    }
    if (correlated && config.n_pairs > 0 && config.n_pairs % 4 != 0) {
      violations.push_back(
          "n_pairs: must be a multiple of 4 for correlated noise");
    }
  }

  if (doc.contains("protocols")) {
    const json& protocols = doc.at("protocols");
    if (!protocols.is_array() || protocols.empty()) {
      violations.push_back("protocols: must be a nonempty array");
    } else {
      config.protocols.clear();
      for (const json& entry : protocols) {
        ProtocolKind kind;
        if (!entry.is_string() ||
            !parse_protocol_name(entry.get<std::string>(), kind)) {
          violations.push_back(
              "protocols: entries must be one of 'proposed', "
              "'clustered_basis', 'per_basis_dfe'");
          continue;
        }
        for (ProtocolKind existing : config.protocols) {
          if (existing == kind) {
            violations.push_back(std::string("protocols: duplicate entry '") +
                                 to_string(kind) + "'");
          }
        }
        config.protocols.push_back(kind);
      }
      if (config.protocols.empty()) config.protocols = {ProtocolKind::Proposed};
    }
  }

  std::uint64_t trials = 0;
  if (get_unsigned(doc, "trials", trials, violations)) {
    if (trials < 1) {
      violations.push_back("trials: must be at least 1");
    } else {
      config.trials = trials;
    }
  }
  get_unsigned(doc, "seed", config.seed, violations);

  if (doc.contains("sweep")) {
    const json& sweep = doc.at("sweep");
    if (!sweep.is_object()) {
      violations.push_back("sweep: must be an object");
    } else {
      check_known_keys(sweep, "sweep", {"p", "d"}, violations);
      auto read_grid = [&](const char* key, std::vector<double>& grid) {
        if (!sweep.contains(key)) return;
        const json& values = sweep.at(key);
        if (!values.is_array() || values.empty()) {
          violations.push_back(std::string("sweep.") + key +
                               ": must be a nonempty array");
          return;
        }
        for (const json& value : values) {
          if (!value.is_number() || !(value.get<double>() >= 0.0 &&
                                      value.get<double>() <= 1.0)) {
            violations.push_back(std::string("sweep.") + key +
                                 ": values must lie in [0, 1]");
            return;
          }
          grid.push_back(value.get<double>());
        }
      };
      read_grid("p", config.sweep_p);
      read_grid("d", config.sweep_d);
      if (!config.sweep_d.empty() && !correlated) {
        violations.push_back("sweep.d: only valid for correlated noise");
      }
    }
  }

  // A fixed correlated point must be feasible outright; sweep grids may
  // contain infeasible combinations, which run_to_csv skips.
  if (correlated && config.sweep_p.empty() && config.sweep_d.empty()) {
    const double good = config.noise.p - config.noise.d / 2.0;
    const double bad = config.noise.p + config.noise.d / 2.0;
    if (good < -1e-12 || bad > 1.0 + 1e-12) {
      violations.push_back(
          "noise: derived channel error probabilities leave [0, 1]");
    }
  }

  if (doc.contains("output_path")) {
    if (!doc.at("output_path").is_string() ||
        doc.at("output_path").get<std::string>().empty()) {
      violations.push_back("output_path: must be a nonempty string");
    } else {
      config.output_path = doc.at("output_path").get<std::string>();
    }
  }

  if (doc.contains("threads")) {
    if (!doc.at("threads").is_number_integer() ||
        doc.at("threads").get<std::int64_t>() < 1) {
      violations.push_back("threads: must be a positive integer");
    } else {
      config.threads = doc.at("threads").get<int>();
    }
  }

  if (violations.empty()) result.config = config;
  return result;
}

ExperimentConfig parse_config(const json& doc) {
  ConfigParseResult result = try_parse_config(doc);
  if (!result.config) {
    std::string message = "invalid experiment config:";
    for (const std::string& violation : result.violations) {
      message += "\n  " + violation;
    }
    throw std::invalid_argument(message);
  }
  return *result.config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  json doc = json::parse(in);  // throws with line/byte diagnostics
  return parse_config(doc);
}

json resolved_config(const ExperimentConfig& config) {
  json noise;
  noise["kind"] =
      config.noise.kind == NoiseKind::Iid ? "iid" : "correlated";
  noise["p"] = config.noise.p;
  if (config.noise.kind == NoiseKind::Correlated) noise["d"] = config.noise.d;

  json protocols = json::array();
  for (ProtocolKind kind : config.protocols) {
    protocols.push_back(to_string(kind));
  }

  json doc;
  doc["n_pairs"] = config.n_pairs;
  doc["m_sampled"] = config.m_sampled;
  doc["noise"] = noise;
  doc["protocols"] = protocols;
  doc["trials"] = config.trials;
  doc["seed"] = config.seed;
  if (!config.sweep_p.empty() || !config.sweep_d.empty()) {
    json sweep;
    if (!config.sweep_p.empty()) sweep["p"] = config.sweep_p;
    if (!config.sweep_d.empty()) sweep["d"] = config.sweep_d;
    doc["sweep"] = sweep;
  }
  doc["output_path"] = config.output_path;
  doc["threads"] = config.threads;
  return doc;
}

std::vector<double> grid_p_values(const ExperimentConfig& config) {
  return config.sweep_p.empty() ? std::vector<double>{config.noise.p}
                                : config.sweep_p;
}

std::vector<double> grid_d_values(const ExperimentConfig& config) {
  if (config.noise.kind == NoiseKind::Iid) return {0.0};
  return config.sweep_d.empty() ? std::vector<double>{config.noise.d}
                                : config.sweep_d;
}

bool grid_point_feasible(const ExperimentConfig& config, double p, double d) {
  if (config.noise.kind == NoiseKind::Iid) return true;
  return p - d / 2.0 >= -1e-12 && p + d / 2.0 <= 1.0 + 1e-12;
}

std::string run_to_csv(const ExperimentConfig& config) {
  std::string csv = csv_header();
  csv += '\n';

  const std::vector<double> p_values = grid_p_values(config);
  const std::vector<double> d_values = grid_d_values(config);

  std::uint64_t flat_index = 0;
  for (double p : p_values) {
    for (double d : d_values) {
      const bool feasible = grid_point_feasible(config, p, d);
      for (ProtocolKind kind : config.protocols) {
        // The row keeps its stream base even when skipped, so adding or
        // removing grid points never reshuffles other rows' randomness.
        const std::uint64_t row_seed =
            derive_stream_seed(config.seed, flat_index);
        ++flat_index;
        if (!feasible) continue;

        const MixtureOfProducts model =
            config.noise.kind == NoiseKind::Iid
                ? iid_model(p, config.n_pairs)
                : correlated_model(NoiseParams(p, d), config.n_pairs);
        const ErrorReport report =
            monte_carlo_error(model, config.m_sampled, kind, config.trials,
                              row_seed, config.threads);

        std::ostringstream row;
        row << format_g17(p) << ',' << format_g17(d) << ','
            << to_string(kind) << ',' << config.n_pairs << ','
            << config.m_sampled << ',' << config.trials << ',' << config.seed
            << ',' << format_g17(report.mse) << ','
            << format_g17(report.mse_stderr) << ',' << format_g17(report.bias)
            << ',' << format_g17(report.bias_stderr) << ',';
        if (report.analytic_bound) row << format_g17(*report.analytic_bound);
        row << ',';
        if (report.decomposition) {
          row << format_g17(report.decomposition->measurement_error) << ','
              << format_g17(report.decomposition->sampling_error);
        } else {
          row << ',';
        }
        csv += row.str();
        csv += '\n';
      }
    }
  }
  return csv;
}

}  // namespace fidsim
