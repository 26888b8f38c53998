#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pdm/error.hpp"
#include "pdm/models/boost.hpp"

using namespace pdm;

TEST_SUITE("boost") {
  TEST_CASE("training RMSE never increases") {
    rng::Stream s(12);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 40 + s.index(150), p = 1 + s.index(5);
      const auto X = oracle::random_matrix(s, n, p);
      auto y = oracle::random_vector(s, n, -3, 3);
      BoostParams params;
      params.n_stages = 60;
      const auto m = fit_boost(X, y, params, 1);
      REQUIRE(m.training_rmse.size() == 61);
      for (std::size_t i = 1; i < m.training_rmse.size(); ++i) CHECK(m.training_rmse[i] <= m.training_rmse[i - 1] + 1e-12);
    }
  }

  TEST_CASE("recorded training RMSE matches a fresh prediction") {
    rng::Stream s(4);
    const auto X = oracle::random_matrix(s, 100, 3);
    const auto y = oracle::random_vector(s, 100);
    const auto m = fit_boost(X, y, BoostParams{}, 0);
    CHECK(m.training_rmse.back() == doctest::Approx(oracle::rmse(y, m.predict(X))).epsilon(1e-10));
    CHECK(m.init_value == doctest::Approx(oracle::mean(y)));
  }

  TEST_CASE("prediction is init plus shrunken stage sum") {
    rng::Stream s(6);
    const auto X = oracle::random_matrix(s, 80, 2);
    const auto y = oracle::random_vector(s, 80);
    BoostParams p;
    p.n_stages = 17;
    p.learning_rate = 0.3;
    const auto m = fit_boost(X, y, p, 0);
    for (int i = 0; i < 50; ++i) {
      const auto x = oracle::random_vector(s, 2);
      double acc = m.init_value;
      for (const auto& t : m.stages) acc += 0.3 * t.predict_row(x);
      CHECK(m.predict_row(x) == doctest::Approx(acc).epsilon(1e-12));
    }
    for (const auto& t : m.stages) CHECK(t.depth() <= 3);
  }

  TEST_CASE("subsampling depends on the seed; full sampling does not") {
    rng::Stream s(7);
    const auto X = oracle::random_matrix(s, 90, 2);
    const auto y = oracle::random_vector(s, 90);
    BoostParams full;
    full.n_stages = 10;
    CHECK(fit_boost(X, y, full, 1).stages == fit_boost(X, y, full, 2).stages);
    BoostParams half = full;
    half.subsample = 0.5;
    CHECK(fit_boost(X, y, half, 1) == fit_boost(X, y, half, 1));
    CHECK_FALSE(fit_boost(X, y, half, 1).stages == fit_boost(X, y, half, 2).stages);
  }

  TEST_CASE("parameter validation") {
    BoostParams p;
    p.learning_rate = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = BoostParams{};
    p.subsample = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = BoostParams{};
    p.n_stages = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
}
