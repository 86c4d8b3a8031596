#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "fidsim/noise.hpp"

using namespace fidsim;

TEST_CASE("noise params validate the derived channel probabilities") {
  CHECK_NOTHROW(NoiseParams(0.5, 0.5));
  CHECK_NOTHROW(NoiseParams(0.5, 1.0));
  CHECK_THROWS_AS(NoiseParams(0.2, 0.6), std::invalid_argument);  // good < 0
  CHECK_THROWS_AS(NoiseParams(0.8, 0.6), std::invalid_argument);  // bad > 1
  CHECK_THROWS_AS(NoiseParams(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseParams(0.5, 1.5), std::invalid_argument);

  const NoiseParams params(0.4, 0.4);
  CHECK(params.good_error_prob() == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(params.bad_error_prob() == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("depolarized pair") {
  CHECK(fidelity(depolarized_pair(0.0)) == 1.0);
  CHECK(fidelity(depolarized_pair(1.0)) == 0.25);
  CHECK(fidelity(depolarized_pair(0.2)) ==
        doctest::Approx(0.85).epsilon(1e-15));
  CHECK(is_werner(depolarized_pair(0.3)));
  CHECK_THROWS_AS(depolarized_pair(1.2), std::invalid_argument);
}

TEST_CASE("iid model") {
  const MixtureOfProducts perfect = iid_model(0.0, 4);
  REQUIRE(perfect.single_component());
  CHECK(perfect.components()[0].weight == 1.0);
  REQUIRE(perfect.components()[0].pair_states.size() == 4);
  for (const PairState& state : perfect.components()[0].pair_states) {
    CHECK(fidelity(state) == 1.0);
  }

  const MixtureOfProducts half = iid_model(0.5, 2);
  for (const PairState& state : half.components()[0].pair_states) {
    CHECK(fidelity(state) == doctest::Approx(0.625).epsilon(1e-15));
  }

  CHECK_THROWS_AS(iid_model(0.1, 0), std::invalid_argument);
}

TEST_CASE("correlated model block layout") {
  const MixtureOfProducts model = correlated_model(NoiseParams(0.4, 0.4), 4);
  REQUIRE(model.components().size() == 2);
  CHECK(model.components()[0].weight == 0.5);
  CHECK(model.components()[1].weight == 0.5);

  const auto& first = model.components()[0].pair_states;
  const auto& second = model.components()[1].pair_states;
  REQUIRE(first.size() == 4);
  REQUIRE(second.size() == 4);

  // one good pair then three bad ones, and the mirrored layout
  CHECK(fidelity(first[0]) == doctest::Approx(0.85).epsilon(1e-15));
  for (int n = 1; n < 4; ++n) {
    CHECK(fidelity(first[n]) == doctest::Approx(0.55).epsilon(1e-15));
  }
  for (int n = 0; n < 3; ++n) {
    CHECK(fidelity(second[n]) == doctest::Approx(0.85).epsilon(1e-15));
  }
  CHECK(fidelity(second[3]) == doctest::Approx(0.55).epsilon(1e-15));

  // mixture-averaged fidelity per position follows the block layout
  for (int n = 0; n < 4; ++n) {
    const double averaged =
        0.5 * fidelity(first[n]) + 0.5 * fidelity(second[n]);
    const double expected = n == 0   ? 0.85
                            : n == 3 ? 0.55
                                     : 0.5 * (0.85 + 0.55);
    CHECK(averaged == doctest::Approx(expected).epsilon(1e-15));
  }

  CHECK_THROWS_AS(correlated_model(NoiseParams(0.4, 0.4), 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(correlated_model(NoiseParams(0.4, 0.4), 0),
                  std::invalid_argument);
}

TEST_CASE("correlated model with d=0 degenerates to the iid model") {
  const MixtureOfProducts correlated =
      correlated_model(NoiseParams(0.3, 0.0), 8);
  const MixtureOfProducts iid = iid_model(0.3, 8);
  for (const auto& component : correlated.components()) {
    for (std::size_t n = 0; n < 8; ++n) {
      for (PauliBasis basis : kPauliBases) {
        CHECK(match_probability(component.pair_states[n], basis) ==
              match_probability(iid.components()[0].pair_states[n], basis));
      }
    }
  }
}

TEST_CASE("correlated model fidelities stay inside the depolarizing range") {
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double d : {0.0, 0.2, 0.5}) {
      if (p - d / 2 < 0.0 || p + d / 2 > 1.0) continue;
      const MixtureOfProducts model =
          correlated_model(NoiseParams(p, d), 8);
      double weight_sum = 0.0;
      for (const auto& component : model.components()) {
        weight_sum += component.weight;
        CHECK(component.pair_states.size() == 8);
        for (const PairState& state : component.pair_states) {
          CHECK(fidelity(state) >= 0.25);
          CHECK(fidelity(state) <= 1.0);
        }
      }
      CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("unsampled mean fidelity") {
  SampleSet sample;
  sample.n_pairs = 4;
  sample.indices = {0, 1};

  const MixtureOfProducts iid = iid_model(0.5, 4);
  CHECK(true_unsampled_mean_fidelity(iid, 0, sample) ==
        doctest::Approx(0.625).epsilon(1e-15));

  const MixtureOfProducts correlated =
      correlated_model(NoiseParams(0.4, 0.4), 4);
  SampleSet middle;
  middle.n_pairs = 4;
  middle.indices = {1, 2};
  CHECK(true_unsampled_mean_fidelity(correlated, 1, middle) ==
        doctest::Approx(0.70).epsilon(1e-15));

  SampleSet empty;
  empty.n_pairs = 4;
  CHECK(true_unsampled_mean_fidelity(correlated, 0, empty) ==
        doctest::Approx((0.85 + 3 * 0.55) / 4).epsilon(1e-15));

  SampleSet all;
  all.n_pairs = 4;
  all.indices = {0, 1, 2, 3};
  CHECK_THROWS_AS(true_unsampled_mean_fidelity(iid, 0, all),
                  std::invalid_argument);
  CHECK_THROWS_AS(true_unsampled_mean_fidelity(iid, 1, sample),
                  std::invalid_argument);
}

TEST_CASE("mixture construction validation") {
  MixtureOfProducts::Component component;
  component.weight = 0.6;
  component.pair_states = {werner(0.9), werner(0.8)};
  CHECK_THROWS_AS(MixtureOfProducts(2, {component}), std::invalid_argument);

  MixtureOfProducts::Component other = component;
  other.weight = 0.4;
  other.pair_states = {werner(0.7)};
  CHECK_THROWS_AS(MixtureOfProducts(2, {component, other}),
                  std::invalid_argument);

  const MixtureOfProducts custom = MixtureOfProducts::from_werner_fidelities(
      {{0.6, {0.9, 0.8}}, {0.4, {0.7, 0.6}}});
  CHECK(custom.n_pairs() == 2);
  CHECK(fidelity(custom.components()[1].pair_states[0]) ==
        doctest::Approx(0.7).epsilon(1e-15));
}
