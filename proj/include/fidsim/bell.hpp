#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace fidsim {

// Bell-basis index order is fixed so that the fidelity w.r.t. the singlet
// target is always component 0.
enum class BellIndex : int {
  PsiMinus = 0,
  PsiPlus = 1,
  PhiMinus = 2,
  PhiPlus = 3,
};

inline constexpr std::array<BellIndex, 4> kBellIndices = {
    BellIndex::PsiMinus, BellIndex::PsiPlus, BellIndex::PhiMinus,
    BellIndex::PhiPlus};

enum class PauliBasis : int { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<PauliBasis, 3> kPauliBases = {
    PauliBasis::X, PauliBasis::Y, PauliBasis::Z};

const char* to_string(PauliBasis basis);

/// Bell-diagonal state of one qubit pair, stored as a probability vector
/// over the four Bell states. Construction refuses vectors that are not a
/// probability distribution (sum within 1e-12 of one, no entry negative);
/// there is no silent renormalization.
class PairState {
 public:
  explicit PairState(const std::array<double, 4>& bell_probs);
  PairState(double psi_minus, double psi_plus, double phi_minus,
            double phi_plus);

  double operator[](BellIndex index) const {
    return probs_[static_cast<int>(index)];
  }
  const std::array<double, 4>& bell_probs() const { return probs_; }

 private:
  std::array<double, 4> probs_;
};

/// Overlap with the singlet target, i.e. the Bell component 0.
double fidelity(const PairState& state);

/// Werner state: fidelity f on the singlet, the rest split equally.
PairState werner(double fidelity_value);

/// True if the non-singlet components are equal within `tol`.
bool is_werner(const PairState& state, double tol = 1e-12);

/// Probabilistic bilateral rotation that removes off-diagonal Bell terms.
/// On the Bell-diagonal representation it is the identity; the dense oracle
/// exercises the off-diagonal action.
PairState twirl(const PairState& state);

/// Symmetrizes the non-singlet weight, producing the Werner state with the
/// same fidelity.
PairState depolarize_to_werner(const PairState& state);

/// Probability that both nodes obtain identical local results when both
/// measure in `basis`. A match is an error for the singlet target.
double match_probability(const PairState& state, PauliBasis basis);

/// One outcome of a separable two-outcome measurement, reduced to its
/// overlap with the singlet projector and with the orthogonal complement.
/// The outcome probability at fidelity f is
///   f * singlet_overlap + (1 - f) / 3 * complement_overlap.
struct OutcomeLaw {
  std::string label;
  double singlet_overlap = 0.0;
  double complement_overlap = 0.0;
};

/// A set of outcome laws forming a complete measurement: overlaps are
/// nonnegative, singlet_overlap <= complement_overlap per outcome, the
/// singlet overlaps sum to 1 and the complement overlaps to 3, so the
/// outcome probabilities form a distribution for every fidelity in [0,1].
class LinearOutcomeModel {
 public:
  explicit LinearOutcomeModel(std::vector<OutcomeLaw> outcomes);

  const std::vector<OutcomeLaw>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  double outcome_probability(std::size_t outcome, double fidelity_value) const;

 private:
  std::vector<OutcomeLaw> outcomes_;
};

/// Outcome law of the randomized-basis match/no-match measurement:
/// Pr(match) = (2/3)(1 - f).
LinearOutcomeModel proposed_outcome_model();

}  // namespace fidsim
