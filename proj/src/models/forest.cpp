#include "pdm/models/forest.hpp"

#include <string>

#include "pdm/error.hpp"
#include "pdm/rng.hpp"
#include "pdm/util.hpp"

namespace pdm {

void ForestParams::validate() const {
  if (n_trees == 0) throw ValidationError("fit_forest: n_trees must be at least 1");
  tree.validate();
}

double ForestModel::predict_row(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& t : trees) acc += t.predict_row(x);
  return acc / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
  return out;
}

bool operator==(const ForestModel& a, const ForestModel& b) {
  return a.trees == b.trees && a.seed == b.seed && a.n_features == b.n_features &&
         a.params.n_trees == b.params.n_trees && a.params.tree == b.params.tree &&
         a.params.bootstrap == b.params.bootstrap;
}

ForestModel fit_forest(const Matrix& X, std::span<const double> y, const ForestParams& params, std::uint64_t seed) {
  params.validate();
  if (X.rows() == 0) throw ValidationError("fit_forest: empty data");
  if (X.rows() != y.size()) throw ValidationError("fit_forest: X and y lengths differ");
  if (X.rows() < 2 * params.tree.min_samples_leaf) {
    throw ValidationError("fit_forest: " + std::to_string(X.rows()) + " rows cannot satisfy min_samples_leaf " +
                          std::to_string(params.tree.min_samples_leaf));
  }

  const PresortedColumns columns(X);
  const std::size_t n = X.rows();

  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.n_features = X.cols();
  model.trees.resize(params.n_trees);

  parallel_for(params.n_trees, params.n_threads, [&](std::size_t i) {
    std::vector<std::uint32_t> weights(n, params.bootstrap ? 0 : 1);
    if (params.bootstrap) {
      rng::Stream stream(rng::derive_seed(seed, i));
      for (std::size_t draw = 0; draw < n; ++draw) ++weights[stream.index(n)];
    }
    model.trees[i] = grow_tree(columns, y, weights, params.tree);
  });
  return model;
}

}  // namespace pdm
