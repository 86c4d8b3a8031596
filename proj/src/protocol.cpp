#include "fidsim/protocol.hpp"

#include <array>
#include <stdexcept>

namespace fidsim {

const char* to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Proposed:
      return "proposed";
    case ProtocolKind::ClusteredBasis:
      return "clustered_basis";
    case ProtocolKind::PerBasisDfe:
      return "per_basis_dfe";
  }
  return "?";
}

BasisAssignment assign_bases(const SampleSet& sample, ProtocolKind kind,
                             RandomStream& rng) {
  const std::size_t m = sample.size();
  BasisAssignment assignment;
  assignment.bases.reserve(m);
  // PerBasisDfe randomizes exactly like Proposed; the two differ only in
  // the estimator.
  if (kind == ProtocolKind::Proposed || kind == ProtocolKind::PerBasisDfe) {
    for (std::size_t i = 0; i < m; ++i) {
      assignment.bases.push_back(
          kPauliBases[static_cast<std::size_t>(rng.next_below(3))]);
    }
    return assignment;
  }
  // Clustered: deterministic blocks over the sorted sample, x first, then
  // y, then z, with ceiling-sized blocks.
  const std::size_t x_count = (m + 2) / 3;
  const std::size_t y_count = (m - x_count + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    if (i < x_count) {
      assignment.bases.push_back(PauliBasis::X);
    } else if (i < x_count + y_count) {
      assignment.bases.push_back(PauliBasis::Y);
    } else {
      assignment.bases.push_back(PauliBasis::Z);
    }
  }
  return assignment;
}

MeasurementDraw simulate_measurement(const MixtureOfProducts& model,
                                     const SampleSet& sample,
                                     const BasisAssignment& bases,
                                     RandomStream& rng) {
  if (sample.n_pairs != model.n_pairs()) {
    throw std::invalid_argument(
        "simulate_measurement: sample refers to a different N");
  }
  if (bases.bases.size() != sample.size()) {
    throw std::invalid_argument(
        "simulate_measurement: basis assignment does not cover the sample");
  }

  const auto& components = model.components();
  std::size_t component = 0;
  if (components.size() > 1) {
    // rounding in the cumulative sum falls back to the last live component
    for (std::size_t k = 0; k < components.size(); ++k) {
      if (components[k].weight > 0.0) component = k;
    }
    const double u = rng.next_double();
    double cumulative = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
      cumulative += components[k].weight;
      if (u < cumulative) {
        component = k;
        break;
      }
    }
  }

  const auto& states = components[component].pair_states;
  MeasurementDraw draw;
  draw.component = component;
  draw.outcome.sample = sample;
  draw.outcome.bases = bases;
  draw.outcome.matches.resize(sample.size());
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double q =
        match_probability(states[sample.indices[i]], bases.bases[i]);
    const std::uint8_t r = rng.next_bernoulli(q) ? 1 : 0;
    draw.outcome.matches[i] = r;
    errors += r;
  }
  draw.outcome.error_count = errors;
  draw.outcome.qber =
      static_cast<double>(errors) / static_cast<double>(sample.size());
  return draw;
}

double estimate(const TrialOutcome& outcome, ProtocolKind kind) {
  const std::size_t m = outcome.sample.size();
  if (m == 0) {
    throw std::invalid_argument("estimate: outcome has no sampled pairs");
  }
  switch (kind) {
    case ProtocolKind::Proposed:
    case ProtocolKind::ClusteredBasis:
      return 1.0 - 1.5 * outcome.qber;
    case ProtocolKind::PerBasisDfe: {
      std::array<std::uint64_t, 3> counts{};
      std::array<std::uint64_t, 3> matched{};
      for (std::size_t i = 0; i < m; ++i) {
        const auto u = static_cast<std::size_t>(outcome.bases.bases[i]);
        ++counts[u];
        matched[u] += outcome.matches[i];
      }
      // Each basis contributes its own correlation estimate; a basis that
      // was never drawn falls back to the pooled match rate.
      double correlation_sum = 0.0;
      for (std::size_t u = 0; u < 3; ++u) {
        const double rate =
            counts[u] > 0 ? static_cast<double>(matched[u]) /
                                static_cast<double>(counts[u])
                          : outcome.qber;
        correlation_sum += 2.0 * rate - 1.0;
      }
      return (1.0 - correlation_sum) / 4.0;
    }
  }
  throw std::invalid_argument("estimate: unknown protocol kind");
}

}  // namespace fidsim
