#pragma once

#include <span>
#include <vector>

#include "pdm/matrix.hpp"

namespace pdm {

// Ridge added on the diagonal when the centered design is near rank-deficient
// (constant lag columns appear in stuck-at data).
inline constexpr double kOlsFallbackRidge = 1e-8;

struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  bool ridge_applied = false;

  std::size_t n_features() const noexcept { return coefficients.size(); }
  double predict_row(std::span<const double> x) const;

  bool operator==(const LinearModel&) const = default;
};

// Ordinary least squares with intercept. The design is centered and solved by
// Householder QR; a near rank-deficient design falls back to the augmented
// ridge system [Xc; sqrt(kOlsFallbackRidge) I] and sets ridge_applied.
LinearModel fit_ols(const Matrix& X, std::span<const double> y);

}  // namespace pdm
