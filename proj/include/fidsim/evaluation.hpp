#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fidsim/noise.hpp"
#include "fidsim/protocol.hpp"

namespace fidsim {

/// Posterior probability of each mixture component given an outcome.
using PosteriorWeights = std::vector<double>;

struct ErrorDecomposition {
  double measurement_error = 0.0;  // mean (estimate - sampled mean)^2
  double sampling_error = 0.0;     // mean (sampled mean - unsampled mean)^2
};

struct ErrorReport {
  double mse = 0.0;
  double mse_stderr = 0.0;
  double bias = 0.0;
  double bias_stderr = 0.0;
  std::uint64_t trials = 0;
  std::optional<double> analytic_bound;             // single-component Werner only
  std::optional<ErrorDecomposition> decomposition;  // single-component only
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularInformationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bayes posterior over components: weights[k] is proportional to
/// w_k times the likelihood of the observed match bits. Throws
/// std::domain_error if the outcome is impossible under every component.
PosteriorWeights posterior(const MixtureOfProducts& model,
                           const TrialOutcome& outcome);

/// Posterior-weighted mean fidelity of the unsampled pairs: the quantity
/// an estimator is judged against. For single-component models this is the
/// deterministic unsampled mean, independent of the outcome.
double conditional_target(const MixtureOfProducts& model,
                          const TrialOutcome& outcome);

/// Monte Carlo estimate of the mean squared estimation error. Each trial
/// draws a sample set, bases and outcome from its own derived stream, so
/// results are identical for any thread count.
ErrorReport monte_carlo_error(const MixtureOfProducts& model, std::size_t m,
                              ProtocolKind kind, std::uint64_t trials,
                              std::uint64_t seed, int threads = 1);

/// Exact expectation by enumerating sample sets, basis assignments,
/// components and outcome bitstrings. Throws CapacityError when
/// (N choose M) * 3^M * 2^M exceeds 1e7.
ErrorReport exact_error(const MixtureOfProducts& model, std::size_t m,
                        ProtocolKind kind);

/// Minimum achievable mean squared error for independent noise with the
/// given per-pair fidelities: sum_n (2 f_n + 1)(1 - f_n) / (2 M N).
double error_lower_bound(const std::vector<double>& fidelities,
                         std::size_t m);

/// Fisher information of a two-overlap outcome law at fidelity f. Outcomes
/// with zero probability are skipped when their fidelity derivative also
/// vanishes; otherwise SingularInformationError is thrown (the regularity
/// condition fails, e.g. at the endpoints of [0, 1]).
double fisher_information(const LinearOutcomeModel& model,
                          double fidelity_value);

/// Splits the error into the estimation error of the sampled pairs and the
/// sampling error. The measurement term is Monte Carlo; the sampling term
/// is exact. Single-component models only.
ErrorDecomposition error_decomposition(const MixtureOfProducts& model,
                                       std::size_t m, ProtocolKind kind,
                                       std::uint64_t trials,
                                       std::uint64_t seed, int threads = 1);

/// Exact mean over all M-subsets of (sampled mean - unsampled mean)^2.
/// Enumerates when the subset count is small, otherwise uses the
/// closed-form finite-population identity.
double exact_sampling_error(const std::vector<double>& fidelities,
                            std::size_t m);

}  // namespace fidsim
