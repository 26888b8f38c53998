#pragma once

// Uniform contract over the three regressor kinds.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdm/features.hpp"
#include "pdm/matrix.hpp"
#include "pdm/models/boost.hpp"
#include "pdm/models/forest.hpp"
#include "pdm/models/linear.hpp"

namespace pdm {

enum class ModelKind { Linear, Forest, Boost };

std::string_view model_kind_name(ModelKind kind);   // "linear" | "forest" | "boost"
std::string_view model_kind_label(ModelKind kind);  // table column label
ModelKind parse_model_kind(std::string_view name);

struct ModelParams {
  ForestParams forest{};
  BoostParams boost{};
};

class ForecastModel {
 public:
  using Impl = std::variant<LinearModel, ForestModel, BoostModel>;

  ForecastModel(LinearModel m) : impl_(std::move(m)) {}
  ForecastModel(ForestModel m) : impl_(std::move(m)) {}
  ForecastModel(BoostModel m) : impl_(std::move(m)) {}

  ModelKind kind() const noexcept { return static_cast<ModelKind>(impl_.index()); }
  std::size_t n_features() const noexcept;
  const Impl& impl() const noexcept { return impl_; }

  // No dimension check; use predict() at API boundaries.
  double predict_row(std::span<const double> x) const;

  friend bool operator==(const ForecastModel&, const ForecastModel&) = default;

 private:
  Impl impl_;
};

ForecastModel fit_model(ModelKind kind, const Matrix& X, std::span<const double> y, const ModelParams& params,
                        std::uint64_t seed);

// Throws ValidationError when X has the wrong number of columns.
std::vector<double> predict(const ForecastModel& model, const Matrix& X);

// sqrt(mean((y - y_hat)^2)).
double rmse(std::span<const double> y, std::span<const double> y_hat);

// A fitted model together with the lag layout it was trained on.
struct TrainedModel {
  ForecastModel model;
  LagSpec lags;
  std::string channel;
  ModelParams params;
  std::uint64_t seed = 0;
};

TrainedModel train_on_series(std::span<const double> series, std::string channel, const LagSpec& lags,
                             ModelKind kind, const ModelParams& params, std::uint64_t seed);

// Forecasts the `horizon` samples following `history` (oldest first).
// Positions beyond min_lag reuse earlier forecasts recursively. history must
// hold at least lags.max_lag samples.
std::vector<double> forecast_horizon(const TrainedModel& trained, std::span<const double> history,
                                     std::size_t horizon);

}  // namespace pdm
