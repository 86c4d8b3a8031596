#include "fidsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace fidsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double binomial_coefficient(std::size_t n, std::size_t k) {
  double value = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    value *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return value;
}

// Visits all k-subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> subset(k);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  for (;;) {
    fn(subset);
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == (i - 1) + n - k) --i;
    if (i == 0) return;
    --i;
    ++subset[i];
    for (++i; i < k; ++i) subset[i] = subset[i - 1] + 1;
  }
}

struct MixtureView {
  std::size_t n_pairs = 0;
  std::size_t n_components = 0;
  bool single = false;
  std::vector<double> weights;
  std::vector<double> fidelities;      // [k * n_pairs + n]
  std::vector<double> fidelity_total;  // per component
  // log Pr(r | state, basis), [((k * n_pairs + n) * 3 + basis) * 2 + r];
  // only filled for multi-component models (the posterior hot path).
  std::vector<double> log_prob;

  explicit MixtureView(const MixtureOfProducts& model) {
    n_pairs = model.n_pairs();
    n_components = model.components().size();
    single = n_components == 1;
    weights.reserve(n_components);
    fidelities.resize(n_components * n_pairs);
    fidelity_total.assign(n_components, 0.0);
    if (!single) log_prob.resize(n_components * n_pairs * 6);
    for (std::size_t k = 0; k < n_components; ++k) {
      const auto& component = model.components()[k];
      weights.push_back(component.weight);
      for (std::size_t n = 0; n < n_pairs; ++n) {
        const double f = fidelity(component.pair_states[n]);
        fidelities[k * n_pairs + n] = f;
        fidelity_total[k] += f;
        if (!single) {
          for (PauliBasis basis : kPauliBases) {
            const double q =
                match_probability(component.pair_states[n], basis);
            const std::size_t base =
                ((k * n_pairs + n) * 3 + static_cast<std::size_t>(basis)) * 2;
            log_prob[base] = std::log(1.0 - q);
            log_prob[base + 1] = std::log(q);
          }
        }
      }
    }
  }

  double log_likelihood(std::size_t k, const TrialOutcome& outcome) const {
    double sum = weights[k] > 0.0 ? std::log(weights[k]) : kNegInf;
    for (std::size_t i = 0; i < outcome.sample.size(); ++i) {
      const std::size_t n = outcome.sample.indices[i];
      const auto basis = static_cast<std::size_t>(outcome.bases.bases[i]);
      sum += log_prob[((k * n_pairs + n) * 3 + basis) * 2 +
                      outcome.matches[i]];
    }
    return sum;
  }
};

double sample_mean(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

// Standard error of the mean, zero for a single observation.
double standard_error(const std::vector<double>& values, double mean) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1) /
                   static_cast<double>(n));
}

bool all_pairs_werner(const MixtureOfProducts& model) {
  for (const auto& component : model.components()) {
    for (const PairState& state : component.pair_states) {
      if (!is_werner(state)) return false;
    }
  }
  return true;
}

std::vector<double> component_fidelities(const MixtureOfProducts& model,
                                         std::size_t k) {
  std::vector<double> fids;
  fids.reserve(model.n_pairs());
  for (const PairState& state : model.components()[k].pair_states) {
    fids.push_back(fidelity(state));
  }
  return fids;
}

}  // namespace

PosteriorWeights posterior(const MixtureOfProducts& model,
                           const TrialOutcome& outcome) {
  if (outcome.sample.n_pairs != model.n_pairs()) {
    throw std::invalid_argument("posterior: sample refers to a different N");
  }
  const auto& components = model.components();
  std::vector<double> log_lik(components.size(), kNegInf);
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].weight <= 0.0) continue;
    double sum = std::log(components[k].weight);
    for (std::size_t i = 0; i < outcome.sample.size(); ++i) {
      const PairState& state =
          components[k].pair_states[outcome.sample.indices[i]];
      const double q = match_probability(state, outcome.bases.bases[i]);
      sum += std::log(outcome.matches[i] ? q : 1.0 - q);
    }
    log_lik[k] = sum;
  }
  const double peak = *std::max_element(log_lik.begin(), log_lik.end());
  if (!(peak > kNegInf)) {
    throw std::domain_error(
        "posterior: outcome has zero probability under every component");
  }
  PosteriorWeights weights(components.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    weights[k] = std::exp(log_lik[k] - peak);
    total += weights[k];
  }
  for (double& w : weights) w /= total;
  return weights;
}

double conditional_target(const MixtureOfProducts& model,
                          const TrialOutcome& outcome) {
  const PosteriorWeights weights = posterior(model, outcome);
  double target = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    target += weights[k] * true_unsampled_mean_fidelity(model, k,
                                                        outcome.sample);
  }
  return target;
}

double exact_sampling_error(const std::vector<double>& fidelities,
                            std::size_t m) {
  const std::size_t n = fidelities.size();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("exact_sampling_error: need 1 <= m < N");
  }
  const double total =
      std::accumulate(fidelities.begin(), fidelities.end(), 0.0);
  if (binomial_coefficient(n, m) <= 200000.0) {
    double accumulated = 0.0;
    std::size_t count = 0;
    for_each_subset(n, m, [&](const std::vector<std::size_t>& subset) {
      double sampled = 0.0;
      for (std::size_t index : subset) sampled += fidelities[index];
      const double sampled_mean = sampled / static_cast<double>(m);
      const double unsampled_mean =
          (total - sampled) / static_cast<double>(n - m);
      const double deviation = sampled_mean - unsampled_mean;
      accumulated += deviation * deviation;
      ++count;
    });
    return accumulated / static_cast<double>(count);
  }
  // Finite-population identity: the mean over subsets equals
  // N^2 var / (M (N - M)(N - 1)) with var the population variance.
  const double mean = total / static_cast<double>(n);
  double variance = 0.0;
  for (double f : fidelities) variance += (f - mean) * (f - mean);
  variance /= static_cast<double>(n);
  return static_cast<double>(n) * static_cast<double>(n) * variance /
         (static_cast<double>(m) * static_cast<double>(n - m) *
          static_cast<double>(n - 1));
}

double error_lower_bound(const std::vector<double>& fidelities,
                         std::size_t m) {
  const std::size_t n = fidelities.size();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("error_lower_bound: need 1 <= m < N");
  }
  double sum = 0.0;
  for (double f : fidelities) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::invalid_argument(
          "error_lower_bound: fidelities must lie in [0, 1]");
    }
    sum += (2.0 * f + 1.0) * (1.0 - f);
  }
  return sum / (2.0 * static_cast<double>(m) * static_cast<double>(n));
}

double fisher_information(const LinearOutcomeModel& model,
                          double fidelity_value) {
  if (!(fidelity_value >= 0.0 && fidelity_value <= 1.0)) {
    throw std::invalid_argument(
        "fisher_information: fidelity must lie in [0, 1]");
  }
  double information = 0.0;
  for (const OutcomeLaw& law : model.outcomes()) {
    const double probability =
        fidelity_value * law.singlet_overlap +
        (1.0 - fidelity_value) / 3.0 * law.complement_overlap;
    const double derivative =
        law.singlet_overlap - law.complement_overlap / 3.0;
    if (probability <= 0.0) {
      if (derivative == 0.0) continue;
      throw SingularInformationError(
          "fisher_information: outcome '" + law.label +
          "' has zero probability but nonzero fidelity derivative");
    }
    information += derivative * derivative / probability;
  }
  return information;
}

ErrorReport monte_carlo_error(const MixtureOfProducts& model, std::size_t m,
                              ProtocolKind kind, std::uint64_t trials,
                              std::uint64_t seed, int threads) {
  const std::size_t n = model.n_pairs();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("monte_carlo_error: need 1 <= m < N");
  }
  if (trials < 1) {
    throw std::invalid_argument("monte_carlo_error: need at least one trial");
  }
  if (threads < 1) {
    throw std::invalid_argument("monte_carlo_error: need at least one thread");
  }

  const MixtureView view(model);
  const double unsampled_count = static_cast<double>(n - m);
  std::vector<double> deviations(trials);
  std::vector<double> measurement_devs(view.single ? trials : 0);

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> log_lik(view.n_components);
    std::vector<double> sampled_sums(view.n_components);
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      RandomStream rng(seed, trial);
      const SampleSet sample = draw_sample_set(n, m, rng);
      const BasisAssignment bases = assign_bases(sample, kind, rng);
      const MeasurementDraw draw =
          simulate_measurement(model, sample, bases, rng);
      const double estimate_value = estimate(draw.outcome, kind);

      for (std::size_t k = 0; k < view.n_components; ++k) {
        double sampled = 0.0;
        for (std::size_t index : sample.indices) {
          sampled += view.fidelities[k * n + index];
        }
        sampled_sums[k] = sampled;
      }

      double target;
      if (view.single) {
        target = (view.fidelity_total[0] - sampled_sums[0]) / unsampled_count;
        measurement_devs[trial] =
            estimate_value - sampled_sums[0] / static_cast<double>(m);
      } else {
        double peak = kNegInf;
        for (std::size_t k = 0; k < view.n_components; ++k) {
          log_lik[k] = view.log_likelihood(k, draw.outcome);
          peak = std::max(peak, log_lik[k]);
        }
        if (!(peak > kNegInf)) {
          throw std::domain_error(
              "monte_carlo_error: outcome impossible under every component");
        }
        double normalizer = 0.0;
        double weighted = 0.0;
        for (std::size_t k = 0; k < view.n_components; ++k) {
          const double w = std::exp(log_lik[k] - peak);
          normalizer += w;
          weighted +=
              w * (view.fidelity_total[k] - sampled_sums[k]) / unsampled_count;
        }
        target = weighted / normalizer;
      }
      deviations[trial] = estimate_value - target;
    }
  };

  const auto worker_count =
      static_cast<std::uint64_t>(std::min<std::uint64_t>(
          static_cast<std::uint64_t>(threads), trials));
  if (worker_count <= 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    const std::uint64_t chunk = (trials + worker_count - 1) / worker_count;
    for (std::uint64_t w = 0; w < worker_count; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(run_range, begin, end);
    }
    for (auto& worker : workers) worker.join();
  }

  std::vector<double> squared(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    squared[t] = deviations[t] * deviations[t];
  }

  ErrorReport report;
  report.trials = trials;
  report.mse = sample_mean(squared);
  report.mse_stderr = standard_error(squared, report.mse);
  report.bias = sample_mean(deviations);
  report.bias_stderr = standard_error(deviations, report.bias);

  if (view.single) {
    const std::vector<double> fids = component_fidelities(model, 0);
    if (all_pairs_werner(model)) {
      report.analytic_bound = error_lower_bound(fids, m);
    }
    ErrorDecomposition decomposition;
    std::vector<double> measurement_sq(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
      measurement_sq[t] = measurement_devs[t] * measurement_devs[t];
    }
    decomposition.measurement_error = sample_mean(measurement_sq);
    decomposition.sampling_error = exact_sampling_error(fids, m);
    report.decomposition = decomposition;
  }
  return report;
}

ErrorReport exact_error(const MixtureOfProducts& model, std::size_t m,
                        ProtocolKind kind) {
  const std::size_t n = model.n_pairs();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("exact_error: need 1 <= m < N");
  }
  const double subset_count = binomial_coefficient(n, m);
  const double assignment_count =
      kind == ProtocolKind::ClusteredBasis ? 1.0
                                           : std::pow(3.0, double(m));
  if (subset_count * std::pow(3.0, double(m)) * std::pow(2.0, double(m)) >
      1e7) {
    throw CapacityError("exact_error: instance too large to enumerate");
  }

  const auto& components = model.components();
  const std::size_t n_components = components.size();
  const double unsampled_count = static_cast<double>(n - m);
  std::vector<double> unsampled_means(n_components);
  std::vector<double> likelihoods(n_components);

  double mse = 0.0;
  double bias = 0.0;
  double measurement = 0.0;

  for_each_subset(n, m, [&](const std::vector<std::size_t>& subset) {
    TrialOutcome outcome;
    outcome.sample.n_pairs = n;
    outcome.sample.indices = subset;
    outcome.matches.assign(m, 0);

    double sampled_mean_single = 0.0;
    for (std::size_t k = 0; k < n_components; ++k) {
      double sampled = 0.0;
      double total = 0.0;
      for (const PairState& state : components[k].pair_states) {
        total += fidelity(state);
      }
      for (std::size_t index : subset) {
        sampled += fidelity(components[k].pair_states[index]);
      }
      unsampled_means[k] = (total - sampled) / unsampled_count;
      if (k == 0) sampled_mean_single = sampled / static_cast<double>(m);
    }

    // One deterministic assignment for the clustered protocol, all 3^m
    // equally likely assignments otherwise.
    RandomStream unused(0, 0);
    const std::uint64_t assignments =
        static_cast<std::uint64_t>(assignment_count);
    for (std::uint64_t code = 0; code < assignments; ++code) {
      if (kind == ProtocolKind::ClusteredBasis) {
        outcome.bases = assign_bases(outcome.sample, kind, unused);
      } else {
        outcome.bases.bases.resize(m);
        std::uint64_t digits = code;
        for (std::size_t i = 0; i < m; ++i) {
          outcome.bases.bases[i] =
              kPauliBases[static_cast<std::size_t>(digits % 3)];
          digits /= 3;
        }
      }

      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < m; ++i) {
          const std::uint8_t r = (bits >> i) & 1u;
          outcome.matches[i] = r;
          errors += r;
        }
        outcome.error_count = errors;
        outcome.qber =
            static_cast<double>(errors) / static_cast<double>(m);

        double outcome_probability = 0.0;
        for (std::size_t k = 0; k < n_components; ++k) {
          double likelihood = components[k].weight;
          for (std::size_t i = 0; i < m && likelihood > 0.0; ++i) {
            const double q = match_probability(
                components[k].pair_states[subset[i]],
                outcome.bases.bases[i]);
            likelihood *= outcome.matches[i] ? q : 1.0 - q;
          }
          likelihoods[k] = likelihood;
          outcome_probability += likelihood;
        }
        if (outcome_probability <= 0.0) continue;

        double target = 0.0;
        for (std::size_t k = 0; k < n_components; ++k) {
          target += likelihoods[k] / outcome_probability * unsampled_means[k];
        }
        const double estimate_value = estimate(outcome, kind);
        const double weight =
            outcome_probability / subset_count / assignment_count;
        const double deviation = estimate_value - target;
        mse += weight * deviation * deviation;
        bias += weight * deviation;
        if (n_components == 1) {
          const double measurement_dev = estimate_value - sampled_mean_single;
          measurement += weight * measurement_dev * measurement_dev;
        }
      }
    }
  });

  ErrorReport report;
  report.trials = 0;
  report.mse = mse;
  report.bias = bias;
  if (model.single_component()) {
    const std::vector<double> fids = component_fidelities(model, 0);
    if (all_pairs_werner(model)) {
      report.analytic_bound = error_lower_bound(fids, m);
    }
    report.decomposition =
        ErrorDecomposition{measurement, exact_sampling_error(fids, m)};
  }
  return report;
}

ErrorDecomposition error_decomposition(const MixtureOfProducts& model,
                                       std::size_t m, ProtocolKind kind,
                                       std::uint64_t trials,
                                       std::uint64_t seed, int threads) {
  if (!model.single_component()) {
    throw std::invalid_argument(
        "error_decomposition: only defined for single-component models");
  }
  const ErrorReport report =
      monte_carlo_error(model, m, kind, trials, seed, threads);
  return *report.decomposition;
}

}  // namespace fidsim
