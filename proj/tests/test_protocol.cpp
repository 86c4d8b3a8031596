#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "fidsim/evaluation.hpp"
#include "fidsim/protocol.hpp"

using namespace fidsim;

namespace {

TrialOutcome make_outcome(std::size_t n_pairs,
                          std::vector<std::size_t> indices,
                          std::vector<PauliBasis> bases,
                          std::vector<std::uint8_t> matches) {
  TrialOutcome outcome;
  outcome.sample.n_pairs = n_pairs;
  outcome.sample.indices = std::move(indices);
  outcome.bases.bases = std::move(bases);
  outcome.matches = std::move(matches);
  for (std::uint8_t r : outcome.matches) outcome.error_count += r;
  outcome.qber = static_cast<double>(outcome.error_count) /
                 static_cast<double>(outcome.matches.size());
  return outcome;
}

// Mixture with basis asymmetry tied to pair position: the clustered
// assignment rule systematically measures low indices in the x basis,
// which these states punish.
MixtureOfProducts asymmetric_position_mixture() {
  const PairState x_heavy(0.7, 0.3, 0.0, 0.0);  // matches often in x and y
  const PairState z_heavy(0.7, 0.0, 0.3, 0.0);  // matches often in y and z
  MixtureOfProducts::Component first;
  first.weight = 0.5;
  first.pair_states = {x_heavy, x_heavy, z_heavy, z_heavy};
  MixtureOfProducts::Component second;
  second.weight = 0.5;
  second.pair_states = {z_heavy, z_heavy, x_heavy, x_heavy};
  return MixtureOfProducts(4, {first, second});
}

}  // namespace

TEST_CASE("sample sets are uniform over all subsets") {
  RandomStream rng(31, 0);
  std::map<std::vector<std::size_t>, std::size_t> counts;
  const std::size_t draws = 1000000;
  for (std::size_t i = 0; i < draws; ++i) {
    counts[draw_sample_set(4, 2, rng).indices] += 1;
  }
  REQUIRE(counts.size() == 6);
  const double expected = draws / 6.0;
  const double three_sigma =
      3.0 * std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
  for (const auto& [subset, count] : counts) {
    CHECK(std::abs(static_cast<double>(count) - expected) < three_sigma);
  }
}

TEST_CASE("single-index samples are uniform") {
  RandomStream rng(32, 0);
  const std::size_t draws = 1000000;
  std::size_t zero_count = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const SampleSet sample = draw_sample_set(2, 1, rng);
    REQUIRE(sample.size() == 1);
    zero_count += sample.indices[0] == 0 ? 1 : 0;
  }
  const double three_sigma = 3.0 * std::sqrt(draws * 0.25);
  CHECK(std::abs(static_cast<double>(zero_count) - draws / 2.0) <
        three_sigma);
}

TEST_CASE("sample set bounds") {
  RandomStream rng(33, 0);
  CHECK_THROWS_AS(draw_sample_set(4, 4, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_sample_set(4, 0, rng), std::invalid_argument);
  for (int i = 0; i < 100; ++i) {
    const SampleSet sample = draw_sample_set(10, 7, rng);
    for (std::size_t j = 1; j < sample.indices.size(); ++j) {
      CHECK(sample.indices[j - 1] < sample.indices[j]);
    }
    CHECK(sample.indices.back() < 10);
  }
}

TEST_CASE("randomized bases are equiprobable") {
  RandomStream rng(34, 0);
  SampleSet sample;
  sample.n_pairs = 2;
  sample.indices = {0};
  std::array<std::size_t, 3> counts{};
  const std::size_t draws = 300000;
  for (std::size_t i = 0; i < draws; ++i) {
    const BasisAssignment assignment =
        assign_bases(sample, ProtocolKind::Proposed, rng);
    counts[static_cast<std::size_t>(assignment.bases[0])] += 1;
  }
  const double three_sigma =
      3.0 * std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
  for (std::size_t count : counts) {
    CHECK(std::abs(static_cast<double>(count) - draws / 3.0) < three_sigma);
  }

  // the per-basis protocol randomizes identically
  RandomStream lhs(34, 1);
  RandomStream rhs(34, 1);
  SampleSet wide;
  wide.n_pairs = 10;
  wide.indices = {0, 2, 4, 6, 8};
  CHECK(assign_bases(wide, ProtocolKind::Proposed, lhs).bases ==
        assign_bases(wide, ProtocolKind::PerBasisDfe, rhs).bases);
}

TEST_CASE("clustered bases follow the deterministic ceiling rule") {
  RandomStream rng(35, 0);
  SampleSet six;
  six.n_pairs = 10;
  six.indices = {0, 1, 2, 3, 4, 5};
  const BasisAssignment blocks =
      assign_bases(six, ProtocolKind::ClusteredBasis, rng);
  CHECK(blocks.bases == std::vector<PauliBasis>{
                            PauliBasis::X, PauliBasis::X, PauliBasis::Y,
                            PauliBasis::Y, PauliBasis::Z, PauliBasis::Z});

  SampleSet four;
  four.n_pairs = 10;
  four.indices = {2, 4, 6, 8};
  const BasisAssignment uneven =
      assign_bases(four, ProtocolKind::ClusteredBasis, rng);
  CHECK(uneven.bases == std::vector<PauliBasis>{PauliBasis::X, PauliBasis::X,
                                                PauliBasis::Y,
                                                PauliBasis::Z});
}

TEST_CASE("perfect singlets never produce matches") {
  RandomStream rng(36, 0);
  const MixtureOfProducts model = iid_model(0.0, 8);
  const SampleSet sample = draw_sample_set(8, 4, rng);
  const BasisAssignment bases =
      assign_bases(sample, ProtocolKind::Proposed, rng);
  for (int i = 0; i < 200; ++i) {
    const MeasurementDraw draw =
        simulate_measurement(model, sample, bases, rng);
    CHECK(draw.component == 0);
    CHECK(draw.outcome.error_count == 0);
    CHECK(draw.outcome.qber == 0.0);
  }
}

TEST_CASE("match frequency follows the pooled outcome law") {
  // aggregate one million sampled pairs at f = 0.25
  RandomStream rng(37, 0);
  const MixtureOfProducts model = iid_model(1.0, 10001);  // werner(0.25)
  std::uint64_t matches = 0;
  const std::size_t trials = 100;
  const std::size_t m = 10000;
  for (std::size_t t = 0; t < trials; ++t) {
    const SampleSet sample = draw_sample_set(10001, m, rng);
    const BasisAssignment bases =
        assign_bases(sample, ProtocolKind::Proposed, rng);
    matches += simulate_measurement(model, sample, bases, rng)
                   .outcome.error_count;
  }
  const double draws = static_cast<double>(trials * m);
  const double expected = 0.5 * draws;
  const double three_sigma = 3.0 * std::sqrt(draws * 0.25);
  CHECK(std::abs(static_cast<double>(matches) - expected) < three_sigma);
}

TEST_CASE("estimator closed forms") {
  const auto zero_errors = make_outcome(4, {0, 1, 2}, {PauliBasis::X,
                                                       PauliBasis::Y,
                                                       PauliBasis::Z},
                                        {0, 0, 0});
  CHECK(estimate(zero_errors, ProtocolKind::Proposed) == 1.0);

  const auto two_thirds = make_outcome(4, {0, 1, 2}, {PauliBasis::X,
                                                      PauliBasis::Y,
                                                      PauliBasis::Z},
                                       {1, 1, 0});
  CHECK(estimate(two_thirds, ProtocolKind::Proposed) ==
        doctest::Approx(0.0).epsilon(1e-15));

  const auto all_errors = make_outcome(4, {0, 1, 2}, {PauliBasis::X,
                                                      PauliBasis::Y,
                                                      PauliBasis::Z},
                                       {1, 1, 1});
  CHECK(estimate(all_errors, ProtocolKind::Proposed) == -0.5);
  CHECK(estimate(all_errors, ProtocolKind::ClusteredBasis) == -0.5);

  TrialOutcome empty;
  CHECK_THROWS_AS(estimate(empty, ProtocolKind::Proposed),
                  std::invalid_argument);
}

TEST_CASE("per-basis estimator renormalizes each setting") {
  // two pairs per basis, one match in x, none elsewhere
  const auto outcome = make_outcome(
      8, {0, 1, 2, 3, 4, 5},
      {PauliBasis::X, PauliBasis::X, PauliBasis::Y, PauliBasis::Y,
       PauliBasis::Z, PauliBasis::Z},
      {1, 0, 0, 0, 0, 0});
  // correlations: x -> 2*(1/2)-1 = 0, y and z -> -1
  CHECK(estimate(outcome, ProtocolKind::PerBasisDfe) ==
        doctest::Approx((1.0 - (0.0 - 1.0 - 1.0)) / 4.0).epsilon(1e-15));

  // a basis with no draws falls back to the pooled rate
  const auto missing_z = make_outcome(
      8, {0, 1, 2, 3}, {PauliBasis::X, PauliBasis::X, PauliBasis::Y,
                        PauliBasis::Y},
      {1, 0, 0, 0});
  const double pooled = 2.0 * 0.25 - 1.0;
  const double expected = (1.0 - (0.0 - 1.0 + pooled)) / 4.0;
  CHECK(estimate(missing_z, ProtocolKind::PerBasisDfe) ==
        doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("proposed estimates are unbiased for a fixed sample set") {
  const MixtureOfProducts model = MixtureOfProducts::from_werner_fidelities(
      {{1.0, {0.9, 0.6, 0.8, 0.7, 0.5}}});
  SampleSet sample;
  sample.n_pairs = 5;
  sample.indices = {1, 3, 4};
  const double sampled_mean = (0.6 + 0.7 + 0.5) / 3.0;

  const std::size_t trials = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng(38, t);
    const BasisAssignment bases =
        assign_bases(sample, ProtocolKind::Proposed, rng);
    const MeasurementDraw draw =
        simulate_measurement(model, sample, bases, rng);
    const double value = estimate(draw.outcome, ProtocolKind::Proposed);
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / trials;
  const double variance = sum_sq / trials - mean * mean;
  const double standard_error = std::sqrt(variance / trials);
  CHECK(std::abs(mean - sampled_mean) <= 4.0 * standard_error);

  // conditional variance for Werner pairs: sum (2f+1)(1-f) / (2 M^2)
  const double predicted = ((2 * 0.6 + 1) * (1 - 0.6) + (2 * 0.7 + 1) *
                            (1 - 0.7) + (2 * 0.5 + 1) * (1 - 0.5)) /
                           (2.0 * 9.0);
  const double variance_tolerance =
      4.0 * predicted * std::sqrt(2.0 / trials) + 4.0 * standard_error;
  CHECK(std::abs(variance - predicted) <= variance_tolerance);
}

TEST_CASE("per-pair match indicator has the predicted variance") {
  const double f = 0.7;
  const MixtureOfProducts model =
      MixtureOfProducts::from_werner_fidelities({{1.0, {f, f}}});
  SampleSet sample;
  sample.n_pairs = 2;
  sample.indices = {0};

  const std::size_t trials = 100000;
  std::uint64_t matches = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng(39, t);
    const BasisAssignment bases =
        assign_bases(sample, ProtocolKind::Proposed, rng);
    matches += simulate_measurement(model, sample, bases, rng)
                   .outcome.error_count;
  }
  const double rate = static_cast<double>(matches) / trials;
  const double q = 2.0 / 3.0 * (1.0 - f);
  const double sigma = std::sqrt(q * (1.0 - q) / trials);
  CHECK(std::abs(rate - q) <= 3.0 * sigma);

  const double predicted_variance = (2 * f + 1) * (2 - 2 * f) / 9.0;
  CHECK(std::abs(rate * (1.0 - rate) - predicted_variance) <= 4.0 * sigma);
}

TEST_CASE("clustered bases are biased on position-correlated asymmetry") {
  const MixtureOfProducts model = asymmetric_position_mixture();
  const std::size_t trials = 40000;

  const ErrorReport clustered = monte_carlo_error(
      model, 2, ProtocolKind::ClusteredBasis, trials, 40);
  const ErrorReport proposed =
      monte_carlo_error(model, 2, ProtocolKind::Proposed, trials, 41);

  CHECK(std::abs(clustered.bias) > 4.0 * clustered.bias_stderr);
  CHECK(std::abs(proposed.bias) <= 4.0 * proposed.bias_stderr);
}

TEST_CASE("identical seeds reproduce measurement sequences bit for bit") {
  const MixtureOfProducts model = correlated_model(NoiseParams(0.5, 0.4), 8);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    RandomStream first(42, trial);
    RandomStream second(42, trial);
    const SampleSet sample_a = draw_sample_set(8, 3, first);
    const SampleSet sample_b = draw_sample_set(8, 3, second);
    CHECK(sample_a.indices == sample_b.indices);
    const BasisAssignment bases_a =
        assign_bases(sample_a, ProtocolKind::Proposed, first);
    const BasisAssignment bases_b =
        assign_bases(sample_b, ProtocolKind::Proposed, second);
    CHECK(bases_a.bases == bases_b.bases);
    const MeasurementDraw draw_a =
        simulate_measurement(model, sample_a, bases_a, first);
    const MeasurementDraw draw_b =
        simulate_measurement(model, sample_b, bases_b, second);
    CHECK(draw_a.component == draw_b.component);
    CHECK(draw_a.outcome.matches == draw_b.outcome.matches);
    CHECK(draw_a.outcome.qber == draw_b.outcome.qber);
  }
}
