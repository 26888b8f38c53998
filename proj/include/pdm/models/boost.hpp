#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdm/matrix.hpp"
#include "pdm/models/tree.hpp"

namespace pdm {

struct BoostParams {
  std::size_t n_stages = 100;
  double learning_rate = 0.1;
  TreeParams tree{3, 1};
  // Fraction of rows each stage is fitted on, drawn without replacement from
  // stream derive_seed(seed, stage). 1.0 uses every row.
  double subsample = 1.0;

  void validate() const;
  bool operator==(const BoostParams&) const = default;
};

// Squared-loss gradient boosting: F_0 = mean(y), F_m = F_{m-1} + lr * tree_m
// where tree_m is fitted to the residuals y - F_{m-1}.
struct BoostModel {
  double init_value = 0.0;
  std::vector<RegressionTree> stages;
  BoostParams params;
  std::uint64_t seed = 0;
  std::size_t n_features = 0;
  // Training RMSE after 0, 1, ..., n_stages stages.
  std::vector<double> training_rmse;

  double predict_row(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;

  bool operator==(const BoostModel&) const = default;
};

BoostModel fit_boost(const Matrix& X, std::span<const double> y, const BoostParams& params, std::uint64_t seed);

}  // namespace pdm
