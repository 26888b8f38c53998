#include <doctest.h>

#include <algorithm>
#include <vector>

#include "pdm/detect.hpp"
#include "pdm/error.hpp"
#include "pdm/rng.hpp"

using namespace pdm;

namespace {

std::vector<double> ramp(std::size_t n, double start, double slope) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + slope * static_cast<double>(i);
  return v;
}

std::vector<std::size_t> starts(const std::vector<FaultEvent>& ev) {
  std::vector<std::size_t> out;
  for (const auto& e : ev) out.push_back(e.start_index);
  return out;
}

void check_sorted_disjoint(const std::vector<FaultEvent>& ev) {
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(ev[i].start_index <= ev[i].end_index);
    if (i > 0) CHECK(ev[i - 1].end_index < ev[i].start_index);
  }
}

}  // namespace

TEST_SUITE("detect") {
  TEST_CASE("gradient outliers") {
    CHECK(detect_outliers_gradient(std::vector<double>(20, 3.0), 1.0).empty());
    const std::vector<double> spike{0, 0, 100, 0, 0};
    const auto ev = detect_outliers_gradient(spike, 10.0);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].kind == FaultKind::Outlier);
    CHECK(ev[0].start_index == 2);
    CHECK(ev[0].end_index == 3);
    CHECK(ev[0].severity >= 90.0);
    CHECK(detect_outliers_gradient(ramp(50, 0, 1), 2.0).empty());
    CHECK_THROWS_AS(detect_outliers_gradient(spike, 0.0), ValidationError);
  }

  TEST_CASE("gradient detector is scale covariant") {
    rng::Stream s(4);
    std::vector<double> v(300);
    for (auto& x : v) x = s.normal(0, 3);
    auto scaled = v;
    for (auto& x : scaled) x *= 2.5;
    CHECK(starts(detect_outliers_gradient(v, 4.0)) == starts(detect_outliers_gradient(scaled, 10.0)));
  }

  TEST_CASE("distance outliers") {
    std::vector<double> v(50, 10.0);
    v[20] = 14.0;
    const auto ev = detect_outliers_distance(v, 11, 5.0);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].start_index == 20);
    CHECK(ev[0].end_index == 20);
    CHECK(detect_outliers_distance(ramp(60, 0, 0.3), 11, 3.0).empty());
    CHECK(detect_outliers_distance(std::vector<double>(30, 1.0), 5, 3.0).empty());
    v[0] = -5.0;  // edge windows shift inward
    CHECK(starts(detect_outliers_distance(v, 11, 5.0)) == std::vector<std::size_t>{0, 20});
    CHECK_THROWS_AS(detect_outliers_distance(v, 4, 3.0), ValidationError);
    CHECK_THROWS_AS(detect_outliers_distance(std::vector<double>(5, 1.0), 7, 3.0), ValidationError);
  }

  TEST_CASE("spikes") {
    std::vector<double> v(40, 30.0);
    for (std::size_t i = 0; i <= 10; ++i) v[10 + i] = 30.0 + 1.2 * static_cast<double>(i);
    for (std::size_t i = 21; i < 40; ++i) v[i] = 42.0;
    const auto ev = detect_spike(v, 10, 5.0);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].kind == FaultKind::Spike);
    // Windows that end inside the ramp and start on the flat still rise enough.
    CHECK(ev[0].start_index >= 1);
    CHECK(ev[0].start_index <= 10);
    CHECK(ev[0].end_index >= 20);
    CHECK(ev[0].end_index <= 30);
    CHECK(ev[0].severity == doctest::Approx(12.0).epsilon(0.2));
    CHECK(detect_spike(std::vector<double>(40, 30.0), 10, 5.0).empty());
    CHECK(detect_spike(ramp(40, 100, -2), 10, 5.0).empty());
  }

  TEST_CASE("stuck-at") {
    DetectorConfig cfg;
    rng::Stream s(1);
    std::vector<double> noise(400);
    for (auto& x : noise) x = s.normal(30, 1.0);
    CHECK(detect_stuck(noise, cfg).empty());

    auto v = noise;
    std::fill(v.begin() + 100, v.begin() + 220, 31.5);
    const auto ev = detect_stuck(v, cfg);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].start_index == 100);
    CHECK(ev[0].end_index == 219);
    CHECK(ev[0].severity == 120.0);

    auto short_run = noise;
    std::fill(short_run.begin() + 100, short_run.begin() + 140, 31.5);
    CHECK(detect_stuck(short_run, cfg).empty());
  }

  TEST_CASE("high variance") {
    DetectorConfig cfg;
    cfg.var_threshold = 25.0;
    std::vector<double> v(200, 30.0);
    for (std::size_t i = 80; i < 140; ++i) v[i] = 30.0 + ((i % 2) ? 10.0 : -10.0);
    const auto ev = detect_high_variance(v, cfg);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].start_index >= 51);
    CHECK(ev[0].start_index <= 80);
    CHECK(ev[0].end_index >= 139);
    CHECK(ev[0].severity == doctest::Approx(100.0));
    CHECK(detect_high_variance(std::vector<double>(100, 2.0), cfg).empty());
    cfg.var_threshold = 1.0;
    CHECK(detect_high_variance(ramp(300, 0, 0.01), cfg).empty());
  }

  TEST_CASE("limit breach") {
    const std::vector<double> v{39, 41, 42, 39, 45};
    const auto ev = detect_limit_breach(v, 40.0);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].start_index == 1);
    CHECK(ev[0].end_index == 2);
    CHECK(ev[1].severity == 5.0);
  }

  TEST_CASE("suite on canonical inputs") {
    DetectorConfig cfg;
    const auto constant = detect_all(std::vector<double>(200, 30.0), cfg);
    REQUIRE(constant.size() == 1);
    CHECK(constant[0].kind == FaultKind::StuckAt);
    CHECK(detect_all(ramp(500, 20, 0.01), cfg).empty());

    rng::Stream s(3);
    std::vector<double> noisy(300);
    for (auto& x : noisy) x = s.normal(30, 0.2);
    noisy[150] += 12.0;
    const auto ev = detect_all(noisy, cfg);
    auto covers_150 = [](const std::vector<FaultEvent>& es) {
      return std::any_of(es.begin(), es.end(), [](const FaultEvent& e) { return e.start_index <= 150 && 150 <= e.end_index; });
    };
    CHECK(covers_150(detect_outliers_gradient(noisy, cfg.gradient_max_rate)));
    CHECK(covers_150(detect_outliers_distance(noisy, cfg.mad_window, cfg.mad_k)));
    CHECK(detect_outliers_distance(noisy, cfg.mad_window, cfg.mad_k).size() <= 2);
    CHECK(std::is_sorted(ev.begin(), ev.end(),
                         [](const FaultEvent& a, const FaultEvent& b) { return a.start_index < b.start_index; }));
  }

  TEST_CASE("detectors are translation covariant") {
    rng::Stream s(8);
    std::vector<double> v(400);
    for (auto& x : v) x = s.normal(30, 0.2);
    std::fill(v.begin() + 200, v.begin() + 290, 30.0);
    for (std::size_t i = 0; i < 10; ++i) v[100 + i] += 1.5 * static_cast<double>(i);
    v[50] += 9.0;
    std::vector<double> shifted(37, v.front());
    shifted.insert(shifted.end(), v.begin(), v.end());
    DetectorConfig cfg;
    for (auto& detector : {detect_stuck, detect_high_variance}) {
      auto a = detector(v, cfg), b = detector(shifted, cfg);
      check_sorted_disjoint(a);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].start_index == a[i].start_index + 37);
    }
    const auto a = detect_spike(v, 10, 5.0), b = detect_spike(shifted, 10, 5.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].start_index == a[i].start_index + 37);
    const auto g = detect_outliers_gradient(v, 5.0), h = detect_outliers_gradient(shifted, 5.0);
    REQUIRE(g.size() == h.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(h[i].start_index == g[i].start_index + 37);
  }

  TEST_CASE("config validation") {
    DetectorConfig c;
    c.mad_window = 1;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = DetectorConfig{};
    c.var_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }

  TEST_CASE("maintenance decision rule") {
    const std::vector<double> calm{33, 34, 35};
    CHECK(decide(calm, 40, 50, 33).action == MaintenanceAction::ContinueOperation);
    const std::vector<double> crossing{38, 39.5, 40.5, 41};
    const auto d = decide(crossing, 40, 50, 38);
    CHECK(d.action == MaintenanceAction::ScheduleWithin);
    CHECK(d.within_s == 300.0);
    REQUIRE(d.trigger.has_value());
    const auto& c = std::get<ForecastCrossing>(*d.trigger);
    CHECK(c.horizon_index == 2);
    CHECK(c.value_kpa == 40.5);
    const auto h = decide(calm, 40, 50, 55);
    CHECK(h.action == MaintenanceAction::HaltNow);
    CHECK(std::get<FaultEvent>(*h.trigger).kind == FaultKind::LimitBreach);
    CHECK(decide(std::vector<double>{40.0}, 40, 50, 39).action == MaintenanceAction::ContinueOperation);
    CHECK_THROWS_AS(decide(std::vector<double>{}, 40, 50, 30), ValidationError);
    CHECK_THROWS_AS(decide(calm, 50, 40, 30), ValidationError);
  }
}
