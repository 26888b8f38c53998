#include "pdm/models/forecast_model.hpp"

#include <cmath>
#include <string>

#include "pdm/error.hpp"
#include "pdm/kernels.hpp"

namespace pdm {

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Forest: return "forest";
    case ModelKind::Boost: return "boost";
  }
  return "unknown";
}

std::string_view model_kind_label(ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear: return "Linear Regression";
    case ModelKind::Forest: return "Random Forest";
    case ModelKind::Boost: return "Gradient Boosting";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear") return ModelKind::Linear;
  if (name == "forest") return ModelKind::Forest;
  if (name == "boost") return ModelKind::Boost;
  throw ValidationError("unknown model kind '" + std::string(name) + "' (expected linear, forest or boost)");
}

std::size_t ForecastModel::n_features() const noexcept {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel>) {
          return m.n_features();
        } else {
          return m.n_features;
        }
      },
      impl_);
}

double ForecastModel::predict_row(std::span<const double> x) const {
  return std::visit([x](const auto& m) { return m.predict_row(x); }, impl_);
}

ForecastModel fit_model(ModelKind kind, const Matrix& X, std::span<const double> y, const ModelParams& params,
                        std::uint64_t seed) {
  switch (kind) {
    case ModelKind::Linear: return fit_ols(X, y);
    case ModelKind::Forest: return fit_forest(X, y, params.forest, seed);
    case ModelKind::Boost: return fit_boost(X, y, params.boost, seed);
  }
  throw ValidationError("fit_model: unknown model kind");
}

std::vector<double> predict(const ForecastModel& model, const Matrix& X) {
  if (X.cols() != model.n_features()) {
    throw ValidationError("predict: model expects " + std::to_string(model.n_features()) + " features, got " +
                          std::to_string(X.cols()));
  }
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = model.predict_row(X.row(r));
  return out;
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) {
    throw ValidationError("rmse: length mismatch (" + std::to_string(y.size()) + " vs " +
                          std::to_string(y_hat.size()) + ")");
  }
  if (y.empty()) throw ValidationError("rmse: empty vectors");
  return std::sqrt(kernels::squared_error_sum(y, y_hat) / static_cast<double>(y.size()));
}

TrainedModel train_on_series(std::span<const double> series, std::string channel, const LagSpec& lags,
                             ModelKind kind, const ModelParams& params, std::uint64_t seed) {
  const SupervisedSet set = make_lag_matrix(series, lags);
  return TrainedModel{fit_model(kind, set.X, set.y, params, seed), lags, std::move(channel), params, seed};
}

std::vector<double> forecast_horizon(const TrainedModel& trained, std::span<const double> history,
                                     std::size_t horizon) {
  const LagSpec& lags = trained.lags;
  if (trained.model.n_features() != lags.count()) {
    throw ValidationError("forecast_horizon: model has " + std::to_string(trained.model.n_features()) +
                          " features but its lag spec yields " + std::to_string(lags.count()));
  }
  if (history.size() < lags.max_lag) {
    throw ValidationError("forecast_horizon: need " + std::to_string(lags.max_lag) + " samples of history, got " +
                          std::to_string(history.size()));
  }
  std::vector<double> buffer(history.end() - static_cast<std::ptrdiff_t>(lags.max_lag), history.end());
  buffer.reserve(lags.max_lag + horizon);
  std::vector<double> features(lags.count());
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    fill_lag_features(buffer, buffer.size(), lags, features);
    const double v = trained.model.predict_row(features);
    out.push_back(v);
    buffer.push_back(v);
  }
  return out;
}

}  // namespace pdm
