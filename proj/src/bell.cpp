#include "fidsim/bell.hpp"

#include <cmath>
#include <stdexcept>

namespace fidsim {

namespace {

constexpr double kSumTol = 1e-12;

void validate_probability_vector(const std::array<double, 4>& probs) {
  double sum = 0.0;
  for (double value : probs) {
    if (!(value >= 0.0)) {
      throw std::invalid_argument(
          "PairState: Bell probabilities must be nonnegative");
    }
    sum += value;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw std::invalid_argument(
        "PairState: Bell probabilities must sum to 1 (renormalization "
        "refused)");
  }
}

}  // namespace

const char* to_string(PauliBasis basis) {
  switch (basis) {
    case PauliBasis::X:
      return "x";
    case PauliBasis::Y:
      return "y";
    case PauliBasis::Z:
      return "z";
  }
  return "?";
}

PairState::PairState(const std::array<double, 4>& bell_probs)
    : probs_(bell_probs) {
  validate_probability_vector(probs_);
}

PairState::PairState(double psi_minus, double psi_plus, double phi_minus,
                     double phi_plus)
    : PairState(std::array<double, 4>{psi_minus, psi_plus, phi_minus,
                                      phi_plus}) {}

double fidelity(const PairState& state) {
  return state[BellIndex::PsiMinus];
}

PairState werner(double fidelity_value) {
  if (!(fidelity_value >= 0.0 && fidelity_value <= 1.0)) {
    throw std::invalid_argument("werner: fidelity must lie in [0, 1]");
  }
  const double rest = (1.0 - fidelity_value) / 3.0;
  return PairState(fidelity_value, rest, rest, rest);
}

bool is_werner(const PairState& state, double tol) {
  const auto& p = state.bell_probs();
  return std::abs(p[1] - p[2]) <= tol && std::abs(p[1] - p[3]) <= tol;
}

PairState twirl(const PairState& state) {
  // Bell-diagonal states are fixed points; there are no off-diagonal terms
  // to remove in this representation.
  return state;
}

PairState depolarize_to_werner(const PairState& state) {
  return werner(fidelity(state));
}

double match_probability(const PairState& state, PauliBasis basis) {
  const auto& p = state.bell_probs();
  // Identical local results project onto the two Bell components that are
  // symmetric under measuring both qubits in the given basis.
  switch (basis) {
    case PauliBasis::X:
      return p[1] + p[3];
    case PauliBasis::Y:
      return p[1] + p[2];
    case PauliBasis::Z:
      return p[2] + p[3];
  }
  throw std::invalid_argument("match_probability: unknown basis");
}

LinearOutcomeModel::LinearOutcomeModel(std::vector<OutcomeLaw> outcomes)
    : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) {
    throw std::invalid_argument("LinearOutcomeModel: no outcomes");
  }
  double singlet_sum = 0.0;
  double complement_sum = 0.0;
  for (const OutcomeLaw& law : outcomes_) {
    if (!(law.singlet_overlap >= 0.0) || !(law.complement_overlap >= 0.0)) {
      throw std::invalid_argument(
          "LinearOutcomeModel: overlaps must be nonnegative");
    }
    if (law.singlet_overlap > law.complement_overlap + kSumTol) {
      throw std::invalid_argument(
          "LinearOutcomeModel: singlet overlap exceeds complement overlap");
    }
    singlet_sum += law.singlet_overlap;
    complement_sum += law.complement_overlap;
  }
  if (std::abs(singlet_sum - 1.0) > kSumTol) {
    throw std::invalid_argument(
        "LinearOutcomeModel: singlet overlaps must sum to 1");
  }
  if (std::abs(complement_sum - 3.0) > kSumTol) {
    throw std::invalid_argument(
        "LinearOutcomeModel: complement overlaps must sum to 3");
  }
}

double LinearOutcomeModel::outcome_probability(std::size_t outcome,
                                               double fidelity_value) const {
  if (outcome >= outcomes_.size()) {
    throw std::invalid_argument("LinearOutcomeModel: outcome out of range");
  }
  if (!(fidelity_value >= 0.0 && fidelity_value <= 1.0)) {
    throw std::invalid_argument(
        "LinearOutcomeModel: fidelity must lie in [0, 1]");
  }
  const OutcomeLaw& law = outcomes_[outcome];
  return fidelity_value * law.singlet_overlap +
         (1.0 - fidelity_value) / 3.0 * law.complement_overlap;
}

LinearOutcomeModel proposed_outcome_model() {
  return LinearOutcomeModel({{"different", 1.0, 1.0}, {"match", 0.0, 2.0}});
}

}  // namespace fidsim
