#pragma once

#include <cstdint>
#include <vector>

#include "fidsim/bell.hpp"
#include "fidsim/noise.hpp"
#include "fidsim/rng.hpp"
#include "fidsim/sampling.hpp"

namespace fidsim {

/// Proposed: i.i.d. uniform basis per sampled pair, pooled QBER estimator.
/// ClusteredBasis: deterministic basis blocks over the sorted sample,
/// same estimator. PerBasisDfe: randomized bases with per-basis
/// renormalization in the estimator.
enum class ProtocolKind { Proposed, ClusteredBasis, PerBasisDfe };

const char* to_string(ProtocolKind kind);

/// Basis choice per sampled pair, aligned with SampleSet::indices.
struct BasisAssignment {
  std::vector<PauliBasis> bases;
};

/// One measured batch. matches[i] is r_n for the i-th sampled index;
/// r_n = 1 records that both local results matched, which is an error for
/// the singlet target.
struct TrialOutcome {
  SampleSet sample;
  BasisAssignment bases;
  std::vector<std::uint8_t> matches;
  std::uint64_t error_count = 0;
  double qber = 0.0;
};

BasisAssignment assign_bases(const SampleSet& sample, ProtocolKind kind,
                             RandomStream& rng);

struct MeasurementDraw {
  std::size_t component = 0;
  TrialOutcome outcome;
};

/// Draws the realized mixture component, then measures each sampled pair
/// independently in its assigned basis (in increasing index order). The
/// component index is returned for evaluation-side conditioning only; it is
/// never visible to the estimator.
MeasurementDraw simulate_measurement(const MixtureOfProducts& model,
                                     const SampleSet& sample,
                                     const BasisAssignment& bases,
                                     RandomStream& rng);

/// Fidelity estimate from one outcome. Results may lie outside [0, 1] and
/// are not clamped; clamping would break unbiasedness.
double estimate(const TrialOutcome& outcome, ProtocolKind kind);

}  // namespace fidsim
