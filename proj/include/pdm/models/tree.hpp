#pragma once

// CART regression tree grown greedily on variance reduction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdm/matrix.hpp"

namespace pdm {

struct TreeParams {
  std::optional<std::size_t> max_depth;  // nullopt = unlimited
  std::size_t min_samples_leaf = 1;

  void validate() const;
  bool operator==(const TreeParams&) const = default;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // mean training target routed to this node

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  TreeParams params;
  std::size_t n_features = 0;

  double predict_row(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;

  bool operator==(const RegressionTree&) const = default;
};

// Column-major copy of a design matrix plus, per feature, the row order
// sorted by value (ties by row index). Built once and shared by every tree of
// an ensemble fitted on the same rows.
class PresortedColumns {
 public:
  explicit PresortedColumns(const Matrix& X);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> column(std::size_t f) const noexcept { return {values_.data() + f * rows_, rows_}; }
  std::span<const std::uint32_t> order(std::size_t f) const noexcept { return {order_.data() + f * rows_, rows_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::uint32_t> order_;
};

// Grows a tree on a weighted sample: row r counts weights[r] times (bootstrap
// multiplicity); rows with weight 0 are excluded.
//
// Candidate thresholds are midpoints between consecutive distinct sorted
// feature values. The split maximizing parent SSE minus children SSE wins;
// ties keep the lowest feature index, then the lowest threshold. Growth stops
// at max_depth, when a child would hold fewer than min_samples_leaf samples,
// or when the node's targets are all equal.
RegressionTree grow_tree(const PresortedColumns& columns, std::span<const double> y,
                         std::span<const std::uint32_t> weights, const TreeParams& params);

RegressionTree fit_tree(const Matrix& X, std::span<const double> y, const TreeParams& params);

}  // namespace pdm
