#pragma once

// Minimal declarations shared with the ISA-specific translation units. Must
// not pull in any standard library header beyond <cstddef>.

#include <cstddef>

namespace pdm::kernels {

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // sum_i (a_i - b_i)^2
  double (*squared_error_sum)(const double* a, const double* b, std::size_t n);
  // sum_i (a_i - center)^2
  double (*squared_deviation_sum)(const double* a, double center, std::size_t n);
  // y_i += alpha * x_i
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

namespace detail {
const KernelTable& scalar_table();
const KernelTable& avx2_table();
const KernelTable& neon_table();
}  // namespace detail

}  // namespace pdm::kernels
