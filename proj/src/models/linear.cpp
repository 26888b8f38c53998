#include "pdm/models/linear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pdm/error.hpp"
#include "pdm/kernels.hpp"

namespace pdm {
namespace {

// Relative size below which a reflected column counts as linearly dependent.
constexpr double kRankTolerance = 1e-10;

struct QrSolution {
  std::vector<double> beta;
  bool rank_deficient = false;
};

// Least-squares solve of A beta ~ b by Householder QR. A is column-major with
// m rows and p columns (each column contiguous); both inputs are consumed.
QrSolution householder_solve(std::vector<double> a, std::size_t m, std::size_t p, std::vector<double> b,
                             double rank_tolerance) {
  auto column = [&](std::size_t j, std::size_t from) {
    return std::span<double>(a.data() + j * m + from, m - from);
  };

  double max_norm = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    auto c = column(j, 0);
    max_norm = std::max(max_norm, std::sqrt(kernels::dot(c, c)));
  }

  QrSolution out;
  std::vector<double> rdiag(p);
  for (std::size_t j = 0; j < p; ++j) {
    auto v = column(j, j);
    const double norm = std::sqrt(kernels::dot(v, v));
    if (norm == 0.0 || norm <= rank_tolerance * max_norm) {
      out.rank_deficient = true;
      return out;
    }
    const double alpha = v[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vtv = kernels::dot(v, v);
    for (std::size_t k = j + 1; k < p; ++k) {
      auto target = column(k, j);
      kernels::axpy(-2.0 * kernels::dot(v, target) / vtv, v, target);
    }
    std::span<double> rhs(b.data() + j, m - j);
    kernels::axpy(-2.0 * kernels::dot(v, rhs) / vtv, v, rhs);
    rdiag[j] = alpha;
  }

  out.beta.assign(p, 0.0);
  for (std::size_t jj = p; jj-- > 0;) {
    double acc = b[jj];
    for (std::size_t k = jj + 1; k < p; ++k) acc -= a[k * m + jj] * out.beta[k];
    out.beta[jj] = acc / rdiag[jj];
  }
  return out;
}

}  // namespace

double LinearModel::predict_row(std::span<const double> x) const {
  return intercept + kernels::dot(coefficients, x);
}

LinearModel fit_ols(const Matrix& X, std::span<const double> y) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  if (n != y.size()) {
    throw ValidationError("fit_ols: X has " + std::to_string(n) + " rows but y has " + std::to_string(y.size()));
  }
  if (n < p + 1) {
    throw ValidationError("fit_ols: " + std::to_string(n) + " rows is fewer than columns + 1 (" +
                          std::to_string(p + 1) + ")");
  }

  std::vector<double> x_mean(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = X.row(r);
    for (std::size_t j = 0; j < p; ++j) x_mean[j] += row[j];
  }
  for (double& m : x_mean) m /= static_cast<double>(n);
  const double y_mean = kernels::sum(y) / static_cast<double>(n);

  std::vector<double> centered(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = X.row(r);
    for (std::size_t j = 0; j < p; ++j) centered[j * n + r] = row[j] - x_mean[j];
  }
  std::vector<double> yc(n);
  for (std::size_t r = 0; r < n; ++r) yc[r] = y[r] - y_mean;

  LinearModel model;
  auto solved = householder_solve(centered, n, p, yc, kRankTolerance);
  if (solved.rank_deficient) {
    const std::size_t m = n + p;
    const double root_ridge = std::sqrt(kOlsFallbackRidge);
    std::vector<double> augmented(m * p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      std::copy(centered.begin() + static_cast<std::ptrdiff_t>(j * n),
                centered.begin() + static_cast<std::ptrdiff_t>((j + 1) * n), augmented.begin() + static_cast<std::ptrdiff_t>(j * m));
      augmented[j * m + n + j] = root_ridge;
    }
    yc.resize(m, 0.0);
    solved = householder_solve(std::move(augmented), m, p, std::move(yc), 0.0);
    if (solved.rank_deficient) throw std::runtime_error("fit_ols: ridge-augmented system is singular");
    model.ridge_applied = true;
  }

  model.coefficients = std::move(solved.beta);
  model.intercept = y_mean - kernels::dot(x_mean, model.coefficients);
  return model;
}

}  // namespace pdm
