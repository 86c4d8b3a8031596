#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fidsim/bell.hpp"
#include "fidsim/sampling.hpp"

namespace fidsim {

/// Two-channel depolarizing noise. `intensity` is the mean of the good and
/// bad channel error probabilities, `heterogeneity` their difference; both
/// derived probabilities must lie in [0, 1].
struct NoiseParams {
  NoiseParams(double intensity, double heterogeneity);

  double intensity;
  double heterogeneity;

  double good_error_prob() const { return intensity - heterogeneity / 2.0; }
  double bad_error_prob() const { return intensity + heterogeneity / 2.0; }
};

/// Classical mixture of per-pair product states: component k holds one
/// Bell-diagonal state per pair and occurs with probability weight_k.
/// Immutable after construction.
class MixtureOfProducts {
 public:
  struct Component {
    double weight = 0.0;
    std::vector<PairState> pair_states;
  };

  MixtureOfProducts(std::size_t n_pairs, std::vector<Component> components);

  /// Convenience constructor for custom experiments: each entry is
  /// (weight, per-pair fidelity list); every pair becomes the Werner state
  /// with that fidelity.
  static MixtureOfProducts from_werner_fidelities(
      const std::vector<std::pair<double, std::vector<double>>>& entries);

  std::size_t n_pairs() const { return n_pairs_; }
  const std::vector<Component>& components() const { return components_; }
  bool single_component() const { return components_.size() == 1; }

 private:
  std::size_t n_pairs_;
  std::vector<Component> components_;
};

/// Depolarizing channel output: error probability e mixes the singlet with
/// the maximally mixed state, giving the Werner state with f = 1 - 3e/4.
PairState depolarized_pair(double error_prob);

/// Independent identical noise on every pair (a single-component mixture).
MixtureOfProducts iid_model(double error_prob, std::size_t n_pairs);

/// Correlated heterogeneous model: an equal mixture of two block layouts,
/// one with the first quarter of the pairs on the good channel and the
/// rest on the bad channel, the other with the proportions reversed.
/// Requires n_pairs to be a positive multiple of 4.
MixtureOfProducts correlated_model(const NoiseParams& params,
                                   std::size_t n_pairs);

/// Mean fidelity over the pairs outside the sample set, for one component.
/// Deterministic; requires the sample to leave at least one pair out.
double true_unsampled_mean_fidelity(const MixtureOfProducts& model,
                                    std::size_t component,
                                    const SampleSet& sample);

}  // namespace fidsim
