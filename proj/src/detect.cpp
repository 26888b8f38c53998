#include "pdm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "pdm/error.hpp"
#include "pdm/kernels.hpp"
#include "pdm/util.hpp"

namespace pdm {
namespace {

constexpr double kMadFloor = 1e-9;
constexpr double kSpikeTrendShare = 0.8;

// Accumulates flagged inclusive index ranges into merged events.
class EventBuilder {
 public:
  explicit EventBuilder(FaultKind kind) : kind_(kind) {}

  void add(std::size_t start, std::size_t end, double severity) {
    if (!events_.empty() && start <= events_.back().end_index + 1) {
      auto& e = events_.back();
      e.end_index = std::max(e.end_index, end);
      e.severity = std::max(e.severity, severity);
      return;
    }
    events_.push_back(FaultEvent{kind_, start, end, severity});
  }

  std::vector<FaultEvent> take() { return std::move(events_); }

 private:
  FaultKind kind_;
  std::vector<FaultEvent> events_;
};

double window_variance(std::span<const double> w) {
  const double mean = kernels::sum(w) / static_cast<double>(w.size());
  return kernels::squared_deviation_sum(w, mean) / static_cast<double>(w.size());
}

double median_in_place(std::vector<double>& v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

void require_window(std::size_t window, std::string_view what) {
  if (window < 2) throw ValidationError(std::string(what) + " must be at least 2 samples");
}

void require_positive(double v, std::string_view what) {
  if (!(v > 0.0)) throw ValidationError(std::string(what) + " must be positive");
}

}  // namespace

std::string_view fault_kind_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::Outlier: return "outlier";
    case FaultKind::Spike: return "spike";
    case FaultKind::StuckAt: return "stuck_at";
    case FaultKind::HighVariance: return "high_variance";
    case FaultKind::LimitBreach: return "limit_breach";
  }
  return "unknown";
}

FaultKind parse_fault_kind(std::string_view name) {
  for (auto k : {FaultKind::Outlier, FaultKind::Spike, FaultKind::StuckAt, FaultKind::HighVariance,
                 FaultKind::LimitBreach}) {
    if (fault_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown fault kind '" + std::string(name) + "'");
}

void DetectorConfig::validate() const {
  require_positive(gradient_max_rate, "gradient_max_rate");
  require_window(mad_window, "mad_window");
  require_positive(mad_k, "mad_k");
  require_window(spike_window, "spike_window");
  require_positive(spike_min_rise, "spike_min_rise");
  require_window(stuck_window, "stuck_window");
  require_positive(stuck_eps_var, "stuck_eps_var");
  if (stuck_min_duration == 0) throw ValidationError("stuck_min_duration must be positive");
  require_window(var_window, "var_window");
  require_positive(var_threshold, "var_threshold");
}

std::vector<FaultEvent> detect_outliers_gradient(std::span<const double> series, double max_rate) {
  require_positive(max_rate, "gradient max_rate");
  if (series.size() < 2) throw ValidationError("detect_outliers_gradient: series needs at least 2 samples");
  EventBuilder events(FaultKind::Outlier);
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double rate = std::abs(series[i] - series[i - 1]);
    if (rate > max_rate) events.add(i, i, rate - max_rate);
  }
  return events.take();
}

std::vector<FaultEvent> detect_outliers_distance(std::span<const double> series, std::size_t window, double k) {
  if (window < 3 || window % 2 == 0) throw ValidationError("detect_outliers_distance: window must be odd and >= 3");
  require_positive(k, "distance multiplier k");
  if (window > series.size()) {
    throw ValidationError("detect_outliers_distance: window " + std::to_string(window) + " exceeds series length " +
                          std::to_string(series.size()));
  }
  const std::size_t half = window / 2;
  const std::size_t n = series.size();
  EventBuilder events(FaultKind::Outlier);
  std::vector<double> buf(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i > half ? i - half : 0, n - window);
    std::copy_n(series.begin() + static_cast<std::ptrdiff_t>(start), window, buf.begin());
    const double median = median_in_place(buf);
    for (std::size_t j = 0; j < window; ++j) buf[j] = std::abs(series[start + j] - median);
    const double mad = std::max(median_in_place(buf), kMadFloor);
    const double bound = k * mad;
    const double dev = std::abs(series[i] - median);
    if (dev > bound) events.add(i, i, dev - bound);
  }
  return events.take();
}

std::vector<FaultEvent> detect_spike(std::span<const double> series, std::size_t window, double min_rise) {
  require_window(window, "spike_window");
  require_positive(min_rise, "spike_min_rise");
  EventBuilder windows(FaultKind::Spike);
  if (series.size() >= window) {
    const std::size_t steps = window - 1;
    std::size_t rising = 0;
    for (std::size_t j = 1; j < window; ++j) rising += series[j] >= series[j - 1] ? 1 : 0;
    for (std::size_t s = 0;; ++s) {
      const std::size_t e = s + window - 1;
      const double rise = series[e] - series[s];
      if (rise >= min_rise && static_cast<double>(rising) >= kSpikeTrendShare * static_cast<double>(steps)) {
        windows.add(s, e, 0.0);
      }
      if (e + 1 >= series.size()) break;
      rising -= series[s + 1] >= series[s] ? 1 : 0;
      rising += series[e + 1] >= series[e] ? 1 : 0;
    }
  }
  auto events = windows.take();
  for (auto& ev : events) {
    double peak = series[ev.start_index];
    for (std::size_t j = ev.start_index; j <= ev.end_index; ++j) peak = std::max(peak, series[j]);
    ev.severity = peak - series[ev.start_index];
  }
  return events;
}

namespace {

template <class Pred>
std::vector<std::pair<std::size_t, std::size_t>> covered_runs(std::span<const double> series, std::size_t window,
                                                              Pred flagged, std::vector<double>* variances) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  if (series.size() < window) return runs;
  for (std::size_t s = 0; s + window <= series.size(); ++s) {
    const double var = window_variance(series.subspan(s, window));
    if (!flagged(var)) continue;
    const std::size_t e = s + window - 1;
    if (!runs.empty() && s <= runs.back().second + 1) {
      runs.back().second = e;
      if (variances) variances->back() = std::max(variances->back(), var);
    } else {
      runs.emplace_back(s, e);
      if (variances) variances->push_back(var);
    }
  }
  return runs;
}

}  // namespace

std::vector<FaultEvent> detect_stuck(std::span<const double> series, const DetectorConfig& config) {
  config.validate();
  if (config.stuck_window > series.size()) {
    throw ValidationError("detect_stuck: stuck_window " + std::to_string(config.stuck_window) +
                          " exceeds series length " + std::to_string(series.size()));
  }
  std::vector<FaultEvent> events;
  for (auto [s, e] : covered_runs(series, config.stuck_window,
                                  [&](double var) { return var < config.stuck_eps_var; }, nullptr)) {
    const std::size_t length = e - s + 1;
    if (length >= config.stuck_min_duration) {
      events.push_back(FaultEvent{FaultKind::StuckAt, s, e, static_cast<double>(length)});
    }
  }
  return events;
}

std::vector<FaultEvent> detect_high_variance(std::span<const double> series, const DetectorConfig& config) {
  config.validate();
  if (config.var_window > series.size()) {
    throw ValidationError("detect_high_variance: var_window " + std::to_string(config.var_window) +
                          " exceeds series length " + std::to_string(series.size()));
  }
  std::vector<double> peaks;
  std::vector<FaultEvent> events;
  const auto runs = covered_runs(series, config.var_window, [&](double var) { return var > config.var_threshold; }, &peaks);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    events.push_back(FaultEvent{FaultKind::HighVariance, runs[i].first, runs[i].second, peaks[i]});
  }
  return events;
}

std::vector<FaultEvent> detect_limit_breach(std::span<const double> series, double limit_kpa) {
  EventBuilder events(FaultKind::LimitBreach);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i] > limit_kpa) events.add(i, i, series[i] - limit_kpa);
  }
  return events.take();
}

std::vector<FaultEvent> detect_all(std::span<const double> series, const DetectorConfig& config) {
  config.validate();
  std::vector<FaultEvent> all;
  auto append = [&all](std::vector<FaultEvent> v) { all.insert(all.end(), v.begin(), v.end()); };
  if (series.size() >= 2) append(detect_outliers_gradient(series, config.gradient_max_rate));
  if (series.size() >= config.mad_window) append(detect_outliers_distance(series, config.mad_window, config.mad_k));
  append(detect_spike(series, config.spike_window, config.spike_min_rise));
  if (series.size() >= config.stuck_window) append(detect_stuck(series, config));
  if (series.size() >= config.var_window) append(detect_high_variance(series, config));
  if (config.limit_kpa) append(detect_limit_breach(series, *config.limit_kpa));
  std::stable_sort(all.begin(), all.end(), [](const FaultEvent& a, const FaultEvent& b) {
    if (a.start_index != b.start_index) return a.start_index < b.start_index;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return all;
}

std::string format_event_summary(std::span<const FaultEvent> events) {
  std::ostringstream out;
  out << "kind           start      end   samples   severity\n";
  out << "----------------------------------------------------\n";
  char line[128];
  for (const auto& e : events) {
    std::snprintf(line, sizeof line, "%-13s %6zu %8zu %9zu %10.3f\n", std::string(fault_kind_name(e.kind)).c_str(),
                  e.start_index, e.end_index, e.end_index - e.start_index + 1, e.severity);
    out << line;
  }
  std::size_t counts[5] = {};
  for (const auto& e : events) ++counts[static_cast<int>(e.kind)];
  out << "\n" << events.size() << " event(s)";
  bool first = true;
  for (int k = 0; k < 5; ++k) {
    if (counts[k] == 0) continue;
    out << (first ? ": " : ", ") << fault_kind_name(static_cast<FaultKind>(k)) << " " << counts[k];
    first = false;
  }
  out << '\n';
  return out.str();
}

std::string_view maintenance_action_name(MaintenanceAction action) {
  switch (action) {
    case MaintenanceAction::ContinueOperation: return "continue_operation";
    case MaintenanceAction::ScheduleWithin: return "schedule_within";
    case MaintenanceAction::HaltNow: return "halt_now";
  }
  return "unknown";
}

MaintenanceDirective decide(std::span<const double> forecast, double limit, double hard_limit, double current,
                            double schedule_window_s) {
  if (forecast.empty()) throw ValidationError("decide: forecast horizon is empty");
  if (!(limit < hard_limit)) throw ValidationError("decide: limit must be below hard_limit");
  if (!(schedule_window_s > 0.0)) throw ValidationError("decide: schedule window must be positive");

  MaintenanceDirective d;
  if (current >= hard_limit) {
    d.action = MaintenanceAction::HaltNow;
    d.trigger = FaultEvent{FaultKind::LimitBreach, 0, 0, current - hard_limit};
    return d;
  }
  for (std::size_t h = 0; h < forecast.size(); ++h) {
    if (forecast[h] > limit) {
      d.action = MaintenanceAction::ScheduleWithin;
      d.within_s = schedule_window_s;
      d.trigger = ForecastCrossing{h, forecast[h]};
      return d;
    }
  }
  return d;
}

}  // namespace pdm
