#include "pdm/features.hpp"

#include <string>

#include "pdm/error.hpp"
#include "pdm/util.hpp"

namespace pdm {

void LagSpec::validate() const {
  if (min_lag == 0) throw ValidationError("LagSpec: min_lag must be positive");
  if (min_lag > max_lag) {
    throw ValidationError("LagSpec: min_lag (" + std::to_string(min_lag) + ") exceeds max_lag (" +
                          std::to_string(max_lag) + ")");
  }
}

void fill_lag_features(std::span<const double> series, std::size_t t, const LagSpec& lags, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = series[t - (lags.min_lag + j)];
}

SupervisedSet make_lag_matrix(std::span<const double> series, const LagSpec& lags) {
  lags.validate();
  if (series.size() <= lags.max_lag) {
    throw ValidationError("make_lag_matrix: series of length " + std::to_string(series.size()) +
                          " is too short; at least " + std::to_string(lags.max_lag + 1) + " samples are required");
  }
  const std::size_t rows = series.size() - lags.max_lag;
  SupervisedSet set{Matrix(rows, lags.count()), std::vector<double>(rows), std::vector<std::size_t>(rows), lags};
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = lags.max_lag + r;
    fill_lag_features(series, t, lags, set.X.row(r));
    set.y[r] = series[t];
    set.origin_index[r] = t;
  }
  return set;
}

SplitPlan walk_forward_splits(std::size_t n_rows, std::size_t k) {
  if (k == 0) throw ValidationError("walk_forward_splits: k must be at least 1");
  if (n_rows < k + 1) {
    throw ValidationError("walk_forward_splits: " + std::to_string(n_rows) + " rows cannot form " +
                          std::to_string(k) + " splits (need at least " + std::to_string(k + 1) + ")");
  }
  const std::size_t t = n_rows / (k + 1);
  SplitPlan plan{k, {}};
  plan.folds.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t train_end = n_rows - (k - i + 1) * t;
    plan.folds.push_back(Fold{{0, train_end}, {train_end, train_end + t}});
  }
  return plan;
}

void write_supervised_csv(std::ostream& out, const SupervisedSet& set) {
  for (std::size_t j = 0; j < set.lags.count(); ++j) out << "lag_" << (set.lags.min_lag + j) << ',';
  out << "target\n";
  for (std::size_t r = 0; r < set.rows(); ++r) {
    for (double v : set.X.row(r)) out << format_double(v) << ',';
    out << format_double(set.y[r]) << '\n';
  }
}

}  // namespace pdm
