#include <doctest.h>

#include <numeric>
#include <sstream>
#include <vector>

#include "pdm/error.hpp"
#include "pdm/features.hpp"
#include "pdm/rng.hpp"

using namespace pdm;

TEST_SUITE("features") {
  TEST_CASE("lag matrix shape for the default lags") {
    std::vector<double> s(100);
    std::iota(s.begin(), s.end(), 0.0);
    const auto set = make_lag_matrix(s, LagSpec{});
    CHECK(set.X.rows() == 70);
    CHECK(set.X.cols() == 26);
    CHECK(set.origin_index.front() == 30);
    CHECK(set.origin_index.back() == 99);
    for (std::size_t r = 0; r < set.rows(); ++r) {
      const std::size_t t = set.origin_index[r];
      CHECK(set.y[r] == s[t]);
      for (std::size_t j = 0; j < 26; ++j) CHECK(set.X(r, j) == s[t - 5 - j]);
    }
  }

  TEST_CASE("small series unrolled by hand") {
    std::vector<double> s{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto set = make_lag_matrix(s, LagSpec{1, 2});
    REQUIRE(set.rows() == 8);
    CHECK(set.X(0, 0) == 1.0);
    CHECK(set.X(0, 1) == 0.0);
    CHECK(set.y[0] == 2.0);
  }

  TEST_CASE("constant series") {
    std::vector<double> s(40, 7.5);
    const auto set = make_lag_matrix(s, LagSpec{});
    for (double v : set.X.data()) CHECK(v == 7.5);
    for (double v : set.y) CHECK(v == 7.5);
  }

  TEST_CASE("short series and bad specs are rejected") {
    std::vector<double> s(30, 1.0);
    CHECK_THROWS_WITH(make_lag_matrix(s, LagSpec{}), doctest::Contains("31"));
    CHECK_THROWS_AS(make_lag_matrix(s, LagSpec{4, 3}), ValidationError);
    CHECK_THROWS_AS(make_lag_matrix(s, LagSpec{0, 3}), ValidationError);
  }

  TEST_CASE("walk-forward plan for 12 rows and 5 splits") {
    const auto plan = walk_forward_splits(12, 5);
    const std::vector<Fold> expected{
        {{0, 2}, {2, 4}}, {{0, 4}, {4, 6}}, {{0, 6}, {6, 8}}, {{0, 8}, {8, 10}}, {{0, 10}, {10, 12}}};
    CHECK(plan.k == 5);
    CHECK(plan.folds == expected);
  }

  TEST_CASE("six rows, five splits") {
    const auto plan = walk_forward_splits(6, 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(plan.folds[i].train.size() == i + 1);
      CHECK(plan.folds[i].test.size() == 1);
    }
    CHECK_THROWS_AS(walk_forward_splits(5, 5), ValidationError);
    CHECK_THROWS_AS(walk_forward_splits(10, 0), ValidationError);
  }

  TEST_CASE("random plans are leak-free, contiguous and expanding") {
    rng::Stream s(23);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t k = 1 + s.index(12);
      const std::size_t n = k + 1 + s.index(500);
      CAPTURE(n);
      CAPTURE(k);
      const auto plan = walk_forward_splits(n, k);
      REQUIRE(plan.folds.size() == k);
      for (std::size_t i = 0; i < k; ++i) {
        const auto& f = plan.folds[i];
        CHECK(f.train.begin == 0);
        CHECK(f.train.end == f.test.begin);
        CHECK(f.test.size() == n / (k + 1));
        if (i > 0) {
          CHECK(plan.folds[i - 1].test.end == f.test.begin);
          CHECK(plan.folds[i - 1].train.end < f.train.end);
        }
      }
      CHECK(plan.folds.back().test.end == n);
    }
  }

  TEST_CASE("lag windows of test rows never reach their own position") {
    std::vector<double> s(300);
    std::iota(s.begin(), s.end(), 0.0);
    const auto set = make_lag_matrix(s, LagSpec{});
    const auto plan = walk_forward_splits(set.rows(), 5);
    for (const auto& f : plan.folds) {
      for (std::size_t r = f.test.begin; r < f.test.end; ++r) {
        const std::size_t t = set.origin_index[r];
        for (std::size_t j = 0; j < set.X.cols(); ++j) CHECK(set.X(r, j) < static_cast<double>(t));
      }
    }
  }

  TEST_CASE("supervised CSV header") {
    std::vector<double> s(40, 1.0);
    std::ostringstream out;
    write_supervised_csv(out, make_lag_matrix(s, LagSpec{}));
    const std::string text = out.str();
    CHECK(text.rfind("lag_5,lag_6,", 0) == 0);
    CHECK(text.find("lag_30,target\n") != std::string::npos);
  }
}
