#pragma once

// Lag-feature supervised sets and leakage-free walk-forward splits.

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "pdm/matrix.hpp"

namespace pdm {

// Lags min_lag..max_lag inclusive, step 1. Lag n is an offset of n samples.
struct LagSpec {
  std::size_t min_lag = 5;
  std::size_t max_lag = 30;

  std::size_t count() const noexcept { return max_lag - min_lag + 1; }
  void validate() const;

  bool operator==(const LagSpec&) const = default;
};

// Row r targets series position t = origin_index[r]; its features are
// series[t - min_lag], ..., series[t - max_lag] (ascending lag order).
struct SupervisedSet {
  Matrix X;
  std::vector<double> y;
  std::vector<std::size_t> origin_index;
  LagSpec lags;

  std::size_t rows() const noexcept { return y.size(); }
};

// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

struct Fold {
  IndexRange train;
  IndexRange test;

  bool operator==(const Fold&) const = default;
};

struct SplitPlan {
  std::size_t k = 0;
  std::vector<Fold> folds;
};

// Writes the lag features of series position t into `out` (size lags.count()).
// Requires t >= lags.max_lag and t <= series.size().
void fill_lag_features(std::span<const double> series, std::size_t t, const LagSpec& lags, std::span<double> out);

SupervisedSet make_lag_matrix(std::span<const double> series, const LagSpec& lags);

// Expanding-window plan: test size t = floor(n / (k + 1)); fold i (1-based)
// trains on [0, n - (k - i + 1) t) and tests on the next t rows.
SplitPlan walk_forward_splits(std::size_t n_rows, std::size_t k);

// CSV with columns lag_<min>..lag_<max>, target.
void write_supervised_csv(std::ostream& out, const SupervisedSet& set);

}  // namespace pdm
