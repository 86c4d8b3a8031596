#include "fidsim/dense_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace fidsim {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kTraceTol = 1e-12;
constexpr double kDustTol = 1e-12;

// Sign patterns of the Bell vectors over |00>,|01>,|10>,|11|, scaled by
// 1/sqrt(2).
constexpr std::array<std::array<int, 4>, 4> kBellPatterns = {{
    {0, 1, -1, 0},  // PsiMinus
    {0, 1, 1, 0},   // PsiPlus
    {1, 0, 0, -1},  // PhiMinus
    {1, 0, 0, 1},   // PhiPlus
}};

bool is_hermitian(const DenseOperator& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const DenseOperator& m) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(
      0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_effect_operator(const DenseOperator& m) {
  if (m.rows() != m.cols() || !is_hermitian(m, kHermTol)) return false;
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(
      0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -kPsdTol &&
         solver.eigenvalues().maxCoeff() <= 1.0 + kPsdTol;
}

bool valid_oracle_dim(Eigen::Index dim) {
  return dim == 4 || dim == 16 || dim == 64;
}

Eigen::Index pow4(int exponent) {
  Eigen::Index value = 1;
  for (int i = 0; i < exponent; ++i) value *= 4;
  return value;
}

}  // namespace

const Eigen::Vector4cd& bell_vector(BellIndex index) {
  static const std::array<Eigen::Vector4cd, 4> vectors = [] {
    std::array<Eigen::Vector4cd, 4> v;
    const double amp = std::sqrt(0.5);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        v[i](static_cast<Eigen::Index>(j)) = amp * kBellPatterns[i][j];
      }
    }
    return v;
  }();
  return vectors[static_cast<std::size_t>(index)];
}

std::array<Eigen::Vector4cd, 4> bell_vectors() {
  return {bell_vector(BellIndex::PsiMinus), bell_vector(BellIndex::PsiPlus),
          bell_vector(BellIndex::PhiMinus), bell_vector(BellIndex::PhiPlus)};
}

const Eigen::Matrix4cd& bell_projector(BellIndex index) {
  // Outer products are built from the integer sign patterns so every entry
  // is exactly 0 or +-0.5.
  static const std::array<Eigen::Matrix4cd, 4> projectors = [] {
    std::array<Eigen::Matrix4cd, 4> p;
    for (std::size_t k = 0; k < 4; ++k) {
      for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
          p[k](i, j) = 0.5 * kBellPatterns[k][static_cast<std::size_t>(i)] *
                       kBellPatterns[k][static_cast<std::size_t>(j)];
        }
      }
    }
    return p;
  }();
  return projectors[static_cast<std::size_t>(index)];
}

std::pair<DenseOperator, DenseOperator> protocol_povm(PauliBasis basis) {
  const auto& psi_minus = bell_projector(BellIndex::PsiMinus);
  const auto& psi_plus = bell_projector(BellIndex::PsiPlus);
  const auto& phi_minus = bell_projector(BellIndex::PhiMinus);
  const auto& phi_plus = bell_projector(BellIndex::PhiPlus);
  switch (basis) {
    case PauliBasis::X:
      return {psi_minus + phi_minus, psi_plus + phi_plus};
    case PauliBasis::Y:
      return {psi_minus + phi_plus, psi_plus + phi_minus};
    case PauliBasis::Z:
      return {psi_minus + psi_plus, phi_minus + phi_plus};
  }
  throw std::invalid_argument("protocol_povm: unknown basis");
}

bool is_density_operator(const DenseOperator& candidate) {
  if (candidate.rows() != candidate.cols()) return false;
  if (!is_hermitian(candidate, kHermTol)) return false;
  const Complex trace = candidate.trace();
  if (std::abs(trace.real() - 1.0) > kTraceTol ||
      std::abs(trace.imag()) > kTraceTol) {
    return false;
  }
  return min_eigenvalue(candidate) >= -kPsdTol;
}

DenseOperator twirl_channel(const DenseOperator& state, int pairs) {
  if (pairs < 1 || pairs > 3) {
    throw std::invalid_argument("twirl_channel: pairs must be 1, 2 or 3");
  }
  const Eigen::Index dim = pow4(pairs);
  if (state.rows() != dim || state.cols() != dim) {
    throw std::invalid_argument(
        "twirl_channel: state dimension does not match the pair count");
  }
  if (!is_density_operator(state)) {
    throw std::invalid_argument(
        "twirl_channel: input is not a valid density operator");
  }
  DenseOperator rho = state;
  for (int pair = 0; pair < pairs; ++pair) {
    const DenseOperator left =
        DenseOperator::Identity(pow4(pair), pow4(pair));
    const DenseOperator right = DenseOperator::Identity(
        pow4(pairs - 1 - pair), pow4(pairs - 1 - pair));
    DenseOperator next = DenseOperator::Zero(dim, dim);
    for (BellIndex phi : kBellIndices) {
      const DenseOperator kraus = Eigen::kroneckerProduct(
          left,
          Eigen::kroneckerProduct(bell_projector(phi), right).eval());
      next += kraus * rho * kraus.adjoint();
    }
    rho = next;
  }
  return rho;
}

DenseOperator twirl_channel_via_rotations(const DenseOperator& state) {
  if (state.rows() != 4 || state.cols() != 4) {
    throw std::invalid_argument(
        "twirl_channel_via_rotations: single pair only");
  }
  if (!is_density_operator(state)) {
    throw std::invalid_argument(
        "twirl_channel_via_rotations: input is not a valid density operator");
  }
  Eigen::Matrix2cd sigma_x;
  sigma_x << 0, 1, 1, 0;
  Eigen::Matrix2cd sigma_y;
  sigma_y << 0, Complex(0, -1), Complex(0, 1), 0;
  const Eigen::Matrix4cd xx = Eigen::kroneckerProduct(sigma_x, sigma_x);
  const Eigen::Matrix4cd yy = Eigen::kroneckerProduct(sigma_y, sigma_y);
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  // Both rotations fire independently with probability one half each.
  const std::array<Eigen::Matrix4cd, 4> kraus = {
      0.5 * id, -0.5 * xx, -0.5 * yy, 0.5 * (yy * xx)};
  DenseOperator result = DenseOperator::Zero(4, 4);
  for (const auto& k : kraus) {
    result += k * state * k.adjoint();
  }
  return result;
}

double born_probability(const DenseOperator& state,
                        const DenseOperator& effect) {
  if (state.rows() != state.cols() || effect.rows() != effect.cols() ||
      state.rows() != effect.rows()) {
    throw std::invalid_argument("born_probability: shape mismatch");
  }
  if (!valid_oracle_dim(state.rows())) {
    throw std::invalid_argument(
        "born_probability: dimension must be 4, 16 or 64");
  }
  if (!is_density_operator(state)) {
    throw std::invalid_argument(
        "born_probability: state is not a valid density operator");
  }
  if (!is_effect_operator(effect)) {
    throw std::invalid_argument(
        "born_probability: effect must satisfy 0 <= E <= I");
  }
  double p = (state * effect).trace().real();
  if (p < 0.0 && p > -kDustTol) p = 0.0;
  return p;
}

double separable_fidelity_ratio(const ProductOperator& op) {
  const DenseOperator a = op.factor_a;
  const DenseOperator b = op.factor_b;
  if (!is_hermitian(a, kPsdTol) || !is_hermitian(b, kPsdTol) ||
      min_eigenvalue(a) < -kPsdTol || min_eigenvalue(b) < -kPsdTol) {
    throw std::invalid_argument(
        "separable_fidelity_ratio: factors must be Hermitian PSD");
  }
  const Eigen::Matrix4cd joint =
      Eigen::kroneckerProduct(op.factor_a, op.factor_b);
  const double denominator = joint.trace().real();
  if (denominator <= 0.0) {
    throw std::invalid_argument(
        "separable_fidelity_ratio: operator has zero trace");
  }
  const Eigen::Vector4cd& singlet = bell_vector(BellIndex::PsiMinus);
  double numerator = (singlet.adjoint() * joint * singlet)(0, 0).real();
  if (numerator < 0.0 && numerator > -kDustTol) numerator = 0.0;
  return numerator / denominator;
}

ProductOperator random_product_operator(RandomStream& rng) {
  auto random_psd = [&rng] {
    Eigen::Matrix2cd g;
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) {
        g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
      }
    }
    return (g * g.adjoint()).eval();
  };
  return {random_psd(), random_psd()};
}

DenseOperator random_density_operator(int dim, RandomStream& rng) {
  if (!valid_oracle_dim(dim)) {
    throw std::invalid_argument(
        "random_density_operator: dimension must be 4, 16 or 64");
  }
  DenseOperator g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
    }
  }
  DenseOperator rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

bool tmur_invariance_check(PauliBasis basis, int outcome) {
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("tmur_invariance_check: outcome must be 0/1");
  }
  const auto [no_match, match] = protocol_povm(basis);
  const DenseOperator& m = outcome == 0 ? no_match : match;
  DenseOperator conjugated = DenseOperator::Zero(4, 4);
  for (BellIndex phi : kBellIndices) {
    conjugated +=
        bell_projector(phi).adjoint() * m * bell_projector(phi);
  }
  return (conjugated - m).cwiseAbs().maxCoeff() <= 1e-12;
}

DenseOperator bell_diagonal_operator(const PairState& state) {
  DenseOperator rho = DenseOperator::Zero(4, 4);
  for (BellIndex index : kBellIndices) {
    rho += state[index] * bell_projector(index);
  }
  return rho;
}

}  // namespace fidsim
