#include "fidsim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace fidsim {

namespace {
constexpr double kWeightSumTol = 1e-12;
}

NoiseParams::NoiseParams(double intensity_value, double heterogeneity_value)
    : intensity(intensity_value), heterogeneity(heterogeneity_value) {
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw std::invalid_argument("NoiseParams: intensity must lie in [0, 1]");
  }
  if (!(heterogeneity >= 0.0 && heterogeneity <= 1.0)) {
    throw std::invalid_argument(
        "NoiseParams: heterogeneity must lie in [0, 1]");
  }
  if (good_error_prob() < -1e-12 || bad_error_prob() > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "NoiseParams: derived channel error probabilities leave [0, 1]");
  }
}

MixtureOfProducts::MixtureOfProducts(std::size_t n_pairs,
                                     std::vector<Component> components)
    : n_pairs_(n_pairs), components_(std::move(components)) {
  if (n_pairs_ < 1) {
    throw std::invalid_argument("MixtureOfProducts: need at least one pair");
  }
  if (components_.empty()) {
    throw std::invalid_argument("MixtureOfProducts: no components");
  }
  double weight_sum = 0.0;
  for (const Component& component : components_) {
    if (!(component.weight >= 0.0)) {
      throw std::invalid_argument(
          "MixtureOfProducts: weights must be nonnegative");
    }
    if (component.pair_states.size() != n_pairs_) {
      throw std::invalid_argument(
          "MixtureOfProducts: every component needs exactly n_pairs states");
    }
    weight_sum += component.weight;
  }
  if (std::abs(weight_sum - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("MixtureOfProducts: weights must sum to 1");
  }
}

MixtureOfProducts MixtureOfProducts::from_werner_fidelities(
    const std::vector<std::pair<double, std::vector<double>>>& entries) {
  if (entries.empty()) {
    throw std::invalid_argument("from_werner_fidelities: no components");
  }
  std::vector<Component> components;
  components.reserve(entries.size());
  for (const auto& [weight, fidelities] : entries) {
    Component component;
    component.weight = weight;
    component.pair_states.reserve(fidelities.size());
    for (double f : fidelities) {
      component.pair_states.push_back(werner(f));
    }
    components.push_back(std::move(component));
  }
  return MixtureOfProducts(entries.front().second.size(),
                           std::move(components));
}

PairState depolarized_pair(double error_prob) {
  if (!(error_prob >= 0.0 && error_prob <= 1.0)) {
    throw std::invalid_argument(
        "depolarized_pair: error probability must lie in [0, 1]");
  }
  return werner(1.0 - 3.0 * error_prob / 4.0);
}

MixtureOfProducts iid_model(double error_prob, std::size_t n_pairs) {
  if (n_pairs < 1) {
    throw std::invalid_argument("iid_model: need at least one pair");
  }
  MixtureOfProducts::Component component;
  component.weight = 1.0;
  component.pair_states.assign(n_pairs, depolarized_pair(error_prob));
  return MixtureOfProducts(n_pairs, {std::move(component)});
}

MixtureOfProducts correlated_model(const NoiseParams& params,
                                   std::size_t n_pairs) {
  if (n_pairs < 4 || n_pairs % 4 != 0) {
    throw std::invalid_argument(
        "correlated_model: n_pairs must be a positive multiple of 4");
  }
  const PairState good = depolarized_pair(
      std::max(0.0, std::min(1.0, params.good_error_prob())));
  const PairState bad = depolarized_pair(
      std::max(0.0, std::min(1.0, params.bad_error_prob())));
  const std::size_t quarter = n_pairs / 4;

  auto block_layout = [&](std::size_t good_count) {
    MixtureOfProducts::Component component;
    component.weight = 0.5;
    component.pair_states.assign(good_count, good);
    component.pair_states.insert(component.pair_states.end(),
                                 n_pairs - good_count, bad);
    return component;
  };
  return MixtureOfProducts(
      n_pairs, {block_layout(quarter), block_layout(3 * quarter)});
}

double true_unsampled_mean_fidelity(const MixtureOfProducts& model,
                                    std::size_t component,
                                    const SampleSet& sample) {
  if (component >= model.components().size()) {
    throw std::invalid_argument(
        "true_unsampled_mean_fidelity: component out of range");
  }
  if (sample.n_pairs != model.n_pairs()) {
    throw std::invalid_argument(
        "true_unsampled_mean_fidelity: sample refers to a different N");
  }
  if (sample.size() >= model.n_pairs()) {
    throw std::invalid_argument(
        "true_unsampled_mean_fidelity: sample covers every pair, the "
        "estimation target is undefined");
  }
  const auto& states = model.components()[component].pair_states;
  double sum = 0.0;
  std::size_t next_sampled = 0;  // indices are sorted
  for (std::size_t n = 0; n < states.size(); ++n) {
    if (next_sampled < sample.indices.size() &&
        sample.indices[next_sampled] == n) {
      ++next_sampled;
      continue;
    }
    sum += fidelity(states[n]);
  }
  return sum / static_cast<double>(model.n_pairs() - sample.size());
}

}  // namespace fidsim
