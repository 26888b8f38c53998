#pragma once

// Data-parallel inner loops shared by the models, detectors and Monte Carlo
// engine. Every kernel has a scalar reference implementation; vector variants
// are selected once at startup from the host CPU's capabilities.
//
// Vector variants reassociate sums, so results may differ from the scalar
// reference in the last few ulps. Within one process the selected ISA never
// changes, which keeps every run bit-reproducible on a given machine.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pdm/detail/kernel_table.hpp"

namespace pdm::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// Every ISA usable on this host, scalar first.
std::vector<Isa> available_isas();

const KernelTable& table(Isa isa);

// Highest available ISA, unless PDM_KERNELS=scalar is set in the environment.
Isa active_isa();
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

inline double squared_error_sum(std::span<const double> a, std::span<const double> b) {
  return active().squared_error_sum(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double squared_deviation_sum(std::span<const double> a, double center) {
  return active().squared_deviation_sum(a.data(), center, a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace pdm::kernels
