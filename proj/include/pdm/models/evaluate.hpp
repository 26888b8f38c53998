#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdm/features.hpp"
#include "pdm/models/forecast_model.hpp"

namespace pdm {

struct EvalReport {
  ModelKind kind = ModelKind::Linear;
  LagSpec lags;
  std::vector<Fold> folds;
  std::vector<double> per_split_rmse;
  double average_rmse = 0.0;

  bool operator==(const EvalReport&) const = default;
};

// Builds the lag set and a k-fold walk-forward plan, fits a fresh model per
// fold on its training rows (seed derive_seed(seed, fold)) and reports the
// test RMSE of each fold plus their mean.
EvalReport evaluate_cv(std::span<const double> series, const LagSpec& lags, std::size_t k, ModelKind kind,
                       const ModelParams& params, std::uint64_t seed);

EvalReport evaluate_cv(const SupervisedSet& set, const SplitPlan& plan, ModelKind kind, const ModelParams& params,
                       std::uint64_t seed);

// Aligned table: one row per split plus "Average", one column per report.
std::string format_eval_table(std::span<const EvalReport> reports);

}  // namespace pdm
