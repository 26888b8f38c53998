#pragma once

// Rule-based sensor fault detectors and the threshold maintenance rule.
//
// All detectors assume uniform 1 Hz sampling and return events sorted by
// start index with no overlaps; flagged indices that touch are merged into one
// inclusive [start, end] event.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdm {

enum class FaultKind { Outlier, Spike, StuckAt, HighVariance, LimitBreach };

std::string_view fault_kind_name(FaultKind kind);
FaultKind parse_fault_kind(std::string_view name);

struct FaultEvent {
  FaultKind kind = FaultKind::Outlier;
  std::size_t start_index = 0;
  std::size_t end_index = 0;  // inclusive
  double severity = 0.0;

  bool operator==(const FaultEvent&) const = default;
};

struct DetectorConfig {
  double gradient_max_rate = 5.0;  // kPa/s
  std::size_t mad_window = 31;     // odd, centered
  double mad_k = 5.0;
  std::size_t spike_window = 10;
  double spike_min_rise = 5.0;  // kPa
  std::size_t stuck_window = 30;
  double stuck_eps_var = 1e-6;  // kPa^2
  std::size_t stuck_min_duration = 60;
  std::size_t var_window = 30;
  double var_threshold = 4.0;  // kPa^2
  std::optional<double> limit_kpa;  // enables detect_limit_breach in detect_all

  void validate() const;
};

// |x_i - x_{i-1}| > max_rate. Severity: largest excess over max_rate.
std::vector<FaultEvent> detect_outliers_gradient(std::span<const double> series, double max_rate);

// |x_i - median_i| > k * max(MAD_i, 1e-9) over a centered window of odd
// length (shifted inward at the edges). Severity: largest excess over the
// k * MAD bound.
std::vector<FaultEvent> detect_outliers_distance(std::span<const double> series, std::size_t window, double k);

// Trailing windows of `window` samples whose last value exceeds the first by
// at least min_rise with at least 80% of steps non-decreasing. Severity: the
// largest rise above the event's first sample.
std::vector<FaultEvent> detect_spike(std::span<const double> series, std::size_t window, double min_rise);

// Maximal runs covered by windows whose population variance is below
// stuck_eps_var, kept when they span at least stuck_min_duration samples.
// Severity: run length in samples.
std::vector<FaultEvent> detect_stuck(std::span<const double> series, const DetectorConfig& config);

// Runs covered by windows whose population variance exceeds var_threshold.
// Severity: largest window variance.
std::vector<FaultEvent> detect_high_variance(std::span<const double> series, const DetectorConfig& config);

// Samples strictly above limit_kpa. Severity: largest excess.
std::vector<FaultEvent> detect_limit_breach(std::span<const double> series, double limit_kpa);

// Every detector in the suite, sorted by (start, kind).
std::vector<FaultEvent> detect_all(std::span<const double> series, const DetectorConfig& config);

std::string format_event_summary(std::span<const FaultEvent> events);

// --- maintenance decision -------------------------------------------------

enum class MaintenanceAction { ContinueOperation, ScheduleWithin, HaltNow };

std::string_view maintenance_action_name(MaintenanceAction action);

struct ForecastCrossing {
  std::size_t horizon_index = 0;  // first forecast step above the limit
  double value_kpa = 0.0;

  bool operator==(const ForecastCrossing&) const = default;
};

struct MaintenanceDirective {
  MaintenanceAction action = MaintenanceAction::ContinueOperation;
  double within_s = 0.0;  // > 0 for ScheduleWithin
  // HaltNow carries a LimitBreach event on the current sample; ScheduleWithin
  // carries the forecast crossing.
  std::optional<std::variant<FaultEvent, ForecastCrossing>> trigger;
};

inline constexpr double kDefaultLimitKpa = 40.0;
inline constexpr double kDefaultHardLimitKpa = 50.0;
inline constexpr double kDefaultScheduleWindowS = 300.0;

// current >= hard_limit -> HaltNow; else any forecast value > limit ->
// ScheduleWithin(schedule_window_s); else ContinueOperation.
MaintenanceDirective decide(std::span<const double> forecast, double limit, double hard_limit, double current,
                            double schedule_window_s = kDefaultScheduleWindowS);

}  // namespace pdm
