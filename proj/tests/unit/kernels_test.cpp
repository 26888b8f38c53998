#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pdm/kernels.hpp"

using namespace pdm;

TEST_SUITE("kernels") {
  TEST_CASE("scalar is always available and listed first") {
    const auto isas = kernels::available_isas();
    REQUIRE_FALSE(isas.empty());
    CHECK(isas.front() == kernels::Isa::Scalar);
    CHECK(kernels::isa_available(kernels::Isa::Scalar));
    CHECK(kernels::isa_name(kernels::Isa::Avx2) == "avx2");
  }

  TEST_CASE("scalar reference on small inputs") {
    const auto& t = kernels::table(kernels::Isa::Scalar);
    const double a[] = {1, 2, 3}, b[] = {4, 5, 6};
    CHECK(t.dot(a, b, 3) == 32.0);
    CHECK(t.sum(a, 3) == 6.0);
    CHECK(t.squared_error_sum(a, b, 3) == 27.0);
    CHECK(t.squared_deviation_sum(a, 2.0, 3) == 2.0);
    double y[] = {1, 1, 1};
    t.axpy(2.0, a, y, 3);
    CHECK(y[0] == 3.0);
    CHECK(y[2] == 7.0);
    CHECK(t.dot(a, b, 0) == 0.0);
    CHECK(t.sum(a, 0) == 0.0);
  }

  TEST_CASE("every variant matches the scalar reference") {
    const auto& ref = kernels::table(kernels::Isa::Scalar);
    rng::Stream s(11);
    for (auto isa : kernels::available_isas()) {
      CAPTURE(kernels::isa_name(isa));
      const auto& t = kernels::table(isa);
      for (std::size_t n = 0; n < 70; ++n) {
        CAPTURE(n);
        auto a = oracle::random_vector(s, n, -100, 100);
        auto b = oracle::random_vector(s, n, -100, 100);
        double mag = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          mag += std::fabs(a[i] * b[i]);
          sq += (a[i] - b[i]) * (a[i] - b[i]) + a[i] * a[i];
        }
        const double tol = 1e-13 * (mag + sq + 1.0);
        CHECK(std::fabs(t.dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= tol);
        CHECK(std::fabs(t.sum(a.data(), n) - ref.sum(a.data(), n)) <= 1e-13 * (100.0 * n + 1.0));
        CHECK(std::fabs(t.squared_error_sum(a.data(), b.data(), n) - ref.squared_error_sum(a.data(), b.data(), n)) <=
              tol);
        CHECK(std::fabs(t.squared_deviation_sum(a.data(), 3.5, n) - ref.squared_deviation_sum(a.data(), 3.5, n)) <=
              tol * 2);
        auto y1 = b, y2 = b;
        t.axpy(0.37, a.data(), y1.data(), n);
        ref.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) <= 1e-12 * (std::fabs(y2[i]) + 1.0));
      }
    }
  }

  TEST_CASE("span wrappers use the shorter length") {
    std::vector<double> a{1, 2, 3, 4}, b{1, 1};
    CHECK(kernels::dot(a, b) == 3.0);
    CHECK(kernels::squared_error_sum(a, b) == 1.0);
  }
}
