#include "pdm/models/boost.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pdm/error.hpp"
#include "pdm/kernels.hpp"
#include "pdm/rng.hpp"

namespace pdm {

void BoostParams::validate() const {
  if (n_stages == 0) throw ValidationError("fit_boost: n_stages must be at least 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ValidationError("fit_boost: learning_rate must lie in (0, 1]");
  }
  if (!(subsample > 0.0 && subsample <= 1.0)) throw ValidationError("fit_boost: subsample must lie in (0, 1]");
  tree.validate();
}

double BoostModel::predict_row(std::span<const double> x) const {
  double f = init_value;
  for (const auto& t : stages) f += params.learning_rate * t.predict_row(x);
  return f;
}

std::vector<double> BoostModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
  return out;
}

BoostModel fit_boost(const Matrix& X, std::span<const double> y, const BoostParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = X.rows();
  if (n == 0) throw ValidationError("fit_boost: empty data");
  if (n != y.size()) throw ValidationError("fit_boost: X and y lengths differ");
  if (n < 2 * params.tree.min_samples_leaf) {
    throw ValidationError("fit_boost: " + std::to_string(n) + " rows cannot satisfy min_samples_leaf " +
                          std::to_string(params.tree.min_samples_leaf));
  }

  BoostModel model;
  model.params = params;
  model.seed = seed;
  model.n_features = X.cols();
  model.init_value = kernels::sum(y) / static_cast<double>(n);

  const PresortedColumns columns(X);
  std::vector<double> fitted(n, model.init_value);
  std::vector<double> residual(n);
  std::vector<std::uint32_t> weights(n, 1);
  std::vector<std::uint32_t> perm(n);
  const std::size_t subsample_rows =
      std::max<std::size_t>(2 * params.tree.min_samples_leaf, static_cast<std::size_t>(params.subsample * static_cast<double>(n)));

  auto training_rmse = [&] { return std::sqrt(kernels::squared_error_sum(y, fitted) / static_cast<double>(n)); };
  model.training_rmse.push_back(training_rmse());

  for (std::size_t m = 0; m < params.n_stages; ++m) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - fitted[i];
    if (params.subsample < 1.0 && subsample_rows < n) {
      // Partial Fisher-Yates: the first subsample_rows entries of perm.
      rng::Stream stream(rng::derive_seed(seed, m));
      std::iota(perm.begin(), perm.end(), 0u);
      std::fill(weights.begin(), weights.end(), 0u);
      for (std::size_t i = 0; i < subsample_rows; ++i) {
        const std::size_t j = i + stream.index(n - i);
        std::swap(perm[i], perm[j]);
        weights[perm[i]] = 1;
      }
    }
    RegressionTree tree = grow_tree(columns, residual, weights, params.tree);
    const std::vector<double> step = tree.predict(X);
    kernels::axpy(params.learning_rate, step, fitted);
    model.stages.push_back(std::move(tree));
    model.training_rmse.push_back(training_rmse());
  }
  return model;
}

}  // namespace pdm
