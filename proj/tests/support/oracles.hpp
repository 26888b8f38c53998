#pragma once

// Independent reference computations for the tests. Nothing here uses the
// library's solvers or kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pdm/matrix.hpp"
#include "pdm/rng.hpp"

namespace oracle {

struct LinearFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
};

// Normal equations [1 X]^T [1 X] b = [1 X]^T y, Gaussian elimination with
// partial pivoting in long double.
inline LinearFit normal_equations(const pdm::Matrix& X, const std::vector<double>& y) {
  const std::size_t n = X.rows(), p = X.cols() + 1;
  std::vector<std::vector<long double>> A(p, std::vector<long double>(p + 1, 0.0L));
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<long double> z(p);
    z[0] = 1.0L;
    for (std::size_t j = 1; j < p; ++j) z[j] = X(r, j - 1);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) A[i][j] += z[i] * z[j];
      A[i][p] += z[i] * y[r];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    if (A[c][c] == 0.0L) throw std::runtime_error("singular normal equations");
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k <= p; ++k) A[r][k] -= f * A[c][k];
    }
  }
  LinearFit fit;
  fit.intercept = static_cast<double>(A[0][p] / A[0][0]);
  for (std::size_t j = 1; j < p; ++j) fit.coefficients.push_back(static_cast<double>(A[j][p] / A[j][j]));
  return fit;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

inline double sse_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  long double m = 0.0L;
  for (double x : v) m += x;
  m /= static_cast<long double>(v.size());
  long double s = 0.0L;
  for (double x : v) s += (x - m) * (x - m);
  return static_cast<double>(s);
}

// Enumerates every feature and every midpoint between distinct sorted values
// and measures children SSE directly. Ties keep the first found (lowest
// feature, then lowest threshold) unless they improve by more than `tol`.
inline Split best_split(const pdm::Matrix& X, const std::vector<double>& y, std::size_t min_leaf, double tol = 1e-9) {
  Split best;
  for (std::size_t f = 0; f < X.cols(); ++f) {
    std::vector<double> vals;
    for (std::size_t r = 0; r < X.rows(); ++r) vals.push_back(X(r, f));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      const double thr = vals[i] + (vals[i + 1] - vals[i]) / 2.0;
      std::vector<double> left, right;
      for (std::size_t r = 0; r < X.rows(); ++r) (X(r, f) <= thr ? left : right).push_back(y[r]);
      if (left.size() < min_leaf || right.size() < min_leaf) continue;
      const double s = sse_of(left) + sse_of(right);
      if (s < best.sse - tol) best = {static_cast<int>(f), thr, s};
    }
  }
  return best;
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += (static_cast<long double>(a[i]) - b[i]) * (a[i] - b[i]);
  return static_cast<double>(std::sqrt(s / static_cast<long double>(a.size())));
}

inline double mean(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double sample_sd(const std::vector<double>& v) {
  const double m = mean(v);
  long double s = 0.0L;
  for (double x : v) s += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(s / static_cast<long double>(v.size() - 1)));
}

// Random design with entries in [-1, 1) and a dominant diagonal-ish scale so
// instances stay well conditioned.
inline pdm::Matrix random_matrix(pdm::rng::Stream& s, std::size_t rows, std::size_t cols) {
  pdm::Matrix X(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) X(r, c) = s.uniform(-1.0, 1.0);
  }
  return X;
}

inline std::vector<double> random_vector(pdm::rng::Stream& s, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = s.uniform(lo, hi);
  return v;
}

}  // namespace oracle
