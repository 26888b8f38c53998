#include "pdm/models/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pdm/error.hpp"

namespace pdm {

void TreeParams::validate() const {
  if (min_samples_leaf == 0) throw ValidationError("TreeParams: min_samples_leaf must be at least 1");
}

double RegressionTree::predict_row(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

std::vector<double> RegressionTree::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
  return out;
}

std::size_t RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  // Children always have larger indices than their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

PresortedColumns::PresortedColumns(const Matrix& X)
    : rows_(X.rows()), cols_(X.cols()), values_(X.rows() * X.cols()), order_(X.rows() * X.cols()) {
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto row = X.row(r);
    for (std::size_t f = 0; f < cols_; ++f) values_[f * rows_ + r] = row[f];
  }
  for (std::size_t f = 0; f < cols_; ++f) {
    auto first = order_.begin() + static_cast<std::ptrdiff_t>(f * rows_);
    std::iota(first, first + static_cast<std::ptrdiff_t>(rows_), 0u);
    const double* col = values_.data() + f * rows_;
    std::stable_sort(first, first + static_cast<std::ptrdiff_t>(rows_),
                     [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

struct PendingNode {
  std::size_t node;
  std::size_t begin;
  std::size_t end;
  std::size_t depth;
};

}  // namespace

RegressionTree grow_tree(const PresortedColumns& columns, std::span<const double> y,
                         std::span<const std::uint32_t> weights, const TreeParams& params) {
  params.validate();
  const std::size_t n = columns.rows();
  const std::size_t p = columns.cols();
  if (n == 0 || p == 0) throw ValidationError("fit_tree: empty data");
  if (y.size() != n || weights.size() != n) throw ValidationError("fit_tree: y/weights length does not match X rows");

  std::size_t active = 0;
  double total_weight = 0.0;
  for (auto w : weights) {
    active += w > 0 ? 1 : 0;
    total_weight += w;
  }
  if (active == 0) throw ValidationError("fit_tree: empty data");
  const double min_leaf = static_cast<double>(params.min_samples_leaf);
  if (total_weight < 2.0 * min_leaf) {
    throw ValidationError("fit_tree: " + std::to_string(static_cast<std::size_t>(total_weight)) +
                          " samples cannot satisfy min_samples_leaf " + std::to_string(params.min_samples_leaf));
  }

  // Per-feature sorted lists of active rows; every node owns the same
  // [begin, end) slice in each list.
  std::vector<std::uint32_t> order(p * active);
  for (std::size_t f = 0; f < p; ++f) {
    std::size_t k = 0;
    for (std::uint32_t r : columns.order(f)) {
      if (weights[r] > 0) order[f * active + k++] = r;
    }
  }

  RegressionTree tree;
  tree.params = params;
  tree.n_features = p;
  tree.nodes.emplace_back();

  std::vector<std::uint8_t> goes_left(n, 0);
  std::vector<std::uint32_t> scratch(active);
  std::vector<PendingNode> stack{{0, 0, active, 0}};

  while (!stack.empty()) {
    const PendingNode item = stack.back();
    stack.pop_back();

    const std::uint32_t* rows = order.data() + item.begin;
    const std::size_t count = item.end - item.begin;
    double w_total = 0.0, s_total = 0.0;
    double y_min = y[rows[0]], y_max = y[rows[0]];
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t r = rows[i];
      w_total += weights[r];
      s_total += weights[r] * y[r];
      y_min = std::min(y_min, y[r]);
      y_max = std::max(y_max, y[r]);
    }
    const double mean = s_total / w_total;
    tree.nodes[item.node].value = mean;

    if (y_min == y_max || w_total < 2.0 * min_leaf) continue;
    if (params.max_depth && item.depth >= *params.max_depth) continue;

    double centered_total = 0.0;
    for (std::size_t i = 0; i < count; ++i) centered_total += weights[rows[i]] * (y[rows[i]] - mean);

    // Maximizing S_L^2/W_L + S_R^2/W_R over centered sums is equivalent to
    // maximizing parent SSE - children SSE.
    double best_gain = 0.0;
    std::int32_t best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t f = 0; f < p; ++f) {
      const std::uint32_t* o = order.data() + f * active + item.begin;
      const auto col = columns.column(f);
      double w_left = 0.0, s_left = 0.0;
      for (std::size_t i = 0; i + 1 < count; ++i) {
        const std::uint32_t r = o[i];
        w_left += weights[r];
        s_left += weights[r] * (y[r] - mean);
        const double x_here = col[r];
        const double x_next = col[o[i + 1]];
        if (!(x_here < x_next)) continue;
        const double w_right = w_total - w_left;
        if (w_left < min_leaf || w_right < min_leaf) continue;
        const double s_right = centered_total - s_left;
        const double gain = s_left * s_left / w_left + s_right * s_right / w_right;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<std::int32_t>(f);
          double mid = x_here + 0.5 * (x_next - x_here);
          if (!(mid < x_next)) mid = x_here;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) continue;

    const auto split_col = columns.column(static_cast<std::size_t>(best_feature));
    std::size_t n_left = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t r = rows[i];
      goes_left[r] = split_col[r] <= best_threshold ? 1 : 0;
      n_left += goes_left[r];
    }
    for (std::size_t f = 0; f < p; ++f) {
      std::uint32_t* o = order.data() + f * active + item.begin;
      std::size_t l = 0, rr = n_left;
      for (std::size_t i = 0; i < count; ++i) {
        if (goes_left[o[i]]) {
          scratch[l++] = o[i];
        } else {
          scratch[rr++] = o[i];
        }
      }
      std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(count), o);
    }

    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[item.node];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = left + 1;

    const std::size_t mid = item.begin + n_left;
    stack.push_back({static_cast<std::size_t>(left + 1), mid, item.end, item.depth + 1});
    stack.push_back({static_cast<std::size_t>(left), item.begin, mid, item.depth + 1});
  }
  return tree;
}

RegressionTree fit_tree(const Matrix& X, std::span<const double> y, const TreeParams& params) {
  if (X.rows() == 0) throw ValidationError("fit_tree: empty data");
  if (X.rows() != y.size()) throw ValidationError("fit_tree: X and y lengths differ");
  const PresortedColumns columns(X);
  const std::vector<std::uint32_t> weights(X.rows(), 1);
  return grow_tree(columns, y, weights, params);
}

}  // namespace pdm
