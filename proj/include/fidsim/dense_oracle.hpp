#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>

#include "fidsim/bell.hpp"
#include "fidsim/rng.hpp"

namespace fidsim {

// Brute-force reference path: dense complex matrices for 1-3 qubit pairs,
// used to validate the Bell-diagonal closed forms.

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;

/// The four Bell vectors in the computational basis |00>,|01>,|10>,|11>,
/// ordered to match BellIndex.
std::array<Eigen::Vector4cd, 4> bell_vectors();
const Eigen::Vector4cd& bell_vector(BellIndex index);

/// Rank-one projector onto a Bell state. Entries are exact multiples of
/// one half, so sums of projectors are exact.
const Eigen::Matrix4cd& bell_projector(BellIndex index);

/// The two-outcome measurement when both nodes measure in `basis`:
/// first the no-match operator, then the match operator. Their sum is the
/// identity exactly as constructed.
std::pair<DenseOperator, DenseOperator> protocol_povm(PauliBasis basis);

/// Hermitian within 1e-12, PSD within 1e-10, unit trace within 1e-12.
bool is_density_operator(const DenseOperator& candidate);

/// Applies the probabilistic bilateral rotation independently to each of
/// `pairs` pairs (Kraus form: the four Bell projectors per pair). Output is
/// Bell-diagonal per pair block; each pair's reduced fidelity is unchanged.
DenseOperator twirl_channel(const DenseOperator& state, int pairs);

/// Same channel expressed as the composition of the two probabilistic
/// rotations (four Kraus branches). Single pair only; kept separate so the
/// two forms can be checked against each other.
DenseOperator twirl_channel_via_rotations(const DenseOperator& state);

/// Tr(state * effect), with negative numerical dust above -1e-12 clamped
/// to zero. Requires a valid density operator and an effect 0 <= E <= I.
double born_probability(const DenseOperator& state,
                        const DenseOperator& effect);

/// A tensor product of single-qubit PSD factors.
struct ProductOperator {
  Eigen::Matrix2cd factor_a;
  Eigen::Matrix2cd factor_b;
};

/// Singlet weight of a product operator:
/// Tr(P_singlet (A (x) B)) / Tr(A (x) B), in [0, 1/2] up to rounding.
double separable_fidelity_ratio(const ProductOperator& op);

/// Random PSD factors G G^dag with standard-normal complex entries.
ProductOperator random_product_operator(RandomStream& rng);

/// Random density operator G G^dag / Tr, dim in {4, 16, 64}.
DenseOperator random_density_operator(int dim, RandomStream& rng);

/// Checks that conjugating the measurement operator by the four Bell
/// projectors reproduces it entrywise within 1e-12.
bool tmur_invariance_check(PauliBasis basis, int outcome);

/// Embeds a Bell-diagonal state as a dense 4x4 density operator.
DenseOperator bell_diagonal_operator(const PairState& state);

}  // namespace fidsim
