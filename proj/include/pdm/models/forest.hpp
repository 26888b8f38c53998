#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdm/matrix.hpp"
#include "pdm/models/tree.hpp"

namespace pdm {

// Defaults: 100 fully grown trees, min_samples_leaf 1, bootstrap on, all
// features considered at every split.
struct ForestParams {
  std::size_t n_trees = 100;
  TreeParams tree{};
  bool bootstrap = true;
  std::size_t n_threads = 0;  // 0 = hardware concurrency; never affects results

  void validate() const;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
  ForestParams params;
  std::uint64_t seed = 0;
  std::size_t n_features = 0;

  // Arithmetic mean of the member trees.
  double predict_row(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;
};

bool operator==(const ForestModel& a, const ForestModel& b);

// Tree i is grown on a bootstrap resample drawn from the stream
// derive_seed(seed, i), so trees can be fitted in any order.
ForestModel fit_forest(const Matrix& X, std::span<const double> y, const ForestParams& params, std::uint64_t seed);

}  // namespace pdm
