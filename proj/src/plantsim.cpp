#include "pdm/plantsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pdm/error.hpp"
#include "pdm/rng.hpp"
#include "pdm/util.hpp"

namespace pdm {
namespace {

// Stream tags keep the trace noise and spike plateau noise independent.
constexpr std::uint64_t kTraceStream = 0x7472616365ULL;   // "trace"
constexpr std::uint64_t kSpikeStream = 0x7370696B65ULL;   // "spike"

double setpoint_at(const TracePlan& plan, std::size_t t) {
  double v = plan.baseline_kpa;
  for (const auto& s : plan.segments) {
    if (s.offset_s > t) break;
    v = s.setpoint_kpa;
  }
  return v;
}

double clean_value(const TracePlan& plan, std::size_t t) {
  if (t < plan.warmup_s) return plan.baseline_kpa * static_cast<double>(t) / static_cast<double>(plan.warmup_s);
  return setpoint_at(plan, t);
}

void validate_injection_against(const FaultInjection& injection, std::size_t length, const char* what) {
  if (const auto* s = std::get_if<SpikeRamp>(&injection)) {
    if (s->at_s + s->rise_s >= length) {
      throw ValidationError(std::string("SpikeRamp at ") + std::to_string(s->at_s) + " s with rise " +
                            std::to_string(s->rise_s) + " s does not fit the " + what + " of " +
                            std::to_string(length) + " samples");
    }
    if (s->hold_sigma_kpa < 0.0) throw ValidationError("SpikeRamp: hold_sigma_kpa must be non-negative");
  } else {
    const auto& st = std::get<StuckAt>(injection);
    if (st.duration_s == 0) throw ValidationError("StuckAt: duration_s must be positive");
    if (st.at_s + st.duration_s > length) {
      throw ValidationError("StuckAt over [" + std::to_string(st.at_s) + ", " + std::to_string(st.at_s + st.duration_s) +
                            ") does not fit the " + what + " of " + std::to_string(length) + " samples");
    }
  }
}

}  // namespace

std::vector<TraceSegment> table1_segments() {
  return {{1200, 35.0}, {1800, 20.0}, {2460, 35.0}, {3180, 20.0}, {4200, 40.0}};
}

void TracePlan::validate() const {
  if (duration_s == 0) throw ValidationError("TracePlan: duration_s must be positive");
  if (!(noise_sigma_kpa >= 0.0)) throw ValidationError("TracePlan: noise_sigma_kpa must be non-negative");
  if (warmup_s > duration_s) throw ValidationError("TracePlan: warmup_s exceeds duration_s");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].offset_s >= duration_s) {
      throw ValidationError("TracePlan: segment " + std::to_string(i) + " offset is beyond the trace duration");
    }
    if (i > 0 && segments[i].offset_s <= segments[i - 1].offset_s) {
      throw ValidationError("TracePlan: segment offsets must be strictly increasing");
    }
  }
  if (channel.empty()) throw ValidationError("TracePlan: channel name is empty");
}

void validate_injection(const FaultInjection& injection, const TracePlan& plan) {
  validate_injection_against(injection, plan.duration_s, "trace duration");
  if (const auto* s = std::get_if<SpikeRamp>(&injection); s && !(s->peak_kpa > plan.baseline_kpa)) {
    throw ValidationError("SpikeRamp: peak_kpa must exceed the baseline pressure");
  }
}

Series generate_trace(const TracePlan& plan, std::uint64_t seed) {
  plan.validate();
  Series s;
  s.name = plan.channel;
  s.unit = default_unit_for(plan.channel);
  s.timestamps.resize(plan.duration_s);
  s.values.resize(plan.duration_s);
  rng::Stream noise(rng::derive_seed(seed, kTraceStream));
  for (std::size_t t = 0; t < plan.duration_s; ++t) {
    s.timestamps[t] = plan.start_epoch + static_cast<std::int64_t>(t);
    double v = clean_value(plan, t);
    if (plan.noise_sigma_kpa > 0.0) v += noise.normal(0.0, plan.noise_sigma_kpa);
    s.values[t] = v;
  }
  return s;
}

Series inject_fault(Series series, const FaultInjection& injection, std::uint64_t seed) {
  validate_injection_against(injection, series.size(), "series");
  auto& x = series.values;
  if (const auto* sp = std::get_if<SpikeRamp>(&injection)) {
    const double p0 = sp->at_s > 0 ? x[sp->at_s - 1] : x[sp->at_s];
    for (std::size_t j = 0; j <= sp->rise_s; ++j) {
      const double frac = sp->rise_s == 0 ? 1.0 : static_cast<double>(j) / static_cast<double>(sp->rise_s);
      x[sp->at_s + j] = p0 + (sp->peak_kpa - p0) * frac;
    }
    rng::Stream noise(rng::derive_seed(seed, kSpikeStream, 0));
    for (std::size_t t = sp->at_s + sp->rise_s + 1; t < x.size(); ++t) {
      x[t] = sp->peak_kpa + (sp->hold_sigma_kpa > 0.0 ? noise.normal(0.0, sp->hold_sigma_kpa) : 0.0);
    }
  } else {
    const auto& st = std::get<StuckAt>(injection);
    std::fill(x.begin() + static_cast<std::ptrdiff_t>(st.at_s),
              x.begin() + static_cast<std::ptrdiff_t>(st.at_s + st.duration_s), x[st.at_s]);
  }
  return series;
}

std::string_view policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Preventive: return "preventive";
    case PolicyKind::Predictive: return "predictive";
    case PolicyKind::Corrective: return "corrective";
  }
  return "unknown";
}

void PolicyConfig::validate() const {
  if (name.empty()) throw ValidationError("PolicyConfig: name is empty");
  if (!(breakdown.fail_limit_kpa > 0.0)) throw ValidationError("PolicyConfig '" + name + "': fail_limit_kpa must be positive");
  if (breakdown.repair_duration_s == 0) throw ValidationError("PolicyConfig '" + name + "': repair_duration_s must be positive");
  auto check_durations = [&](std::size_t maint) {
    if (maint == 0) throw ValidationError("PolicyConfig '" + name + "': maint_duration_s must be positive");
    if (maint >= breakdown.repair_duration_s) {
      throw ValidationError("PolicyConfig '" + name + "': maint_duration_s must be shorter than repair_duration_s");
    }
  };
  if (const auto* p = std::get_if<PreventivePolicy>(&policy)) {
    if (p->cycle_s == 0) throw ValidationError("PolicyConfig '" + name + "': cycle_s must be positive");
    check_durations(p->maint_duration_s);
  } else if (const auto* q = std::get_if<PredictivePolicy>(&policy)) {
    check_durations(q->maint_duration_s);
    if (!q->model) throw ValidationError("PolicyConfig '" + name + "': predictive policy needs a trained model");
    if (q->model->model.n_features() != q->model->lags.count()) {
      throw ValidationError("PolicyConfig '" + name + "': model feature count " +
                            std::to_string(q->model->model.n_features()) + " does not match its lag spec (" +
                            std::to_string(q->model->lags.count()) + ")");
    }
    if (q->horizon_s == 0) throw ValidationError("PolicyConfig '" + name + "': horizon_s must be positive");
    if (q->schedule_window_s == 0) throw ValidationError("PolicyConfig '" + name + "': schedule_window_s must be positive");
    if (!(q->limit_kpa < q->hard_limit_kpa)) {
      throw ValidationError("PolicyConfig '" + name + "': limit_kpa must be below hard_limit_kpa");
    }
  }
}

SimOutcome run_policy(const TracePlan& plan, std::span<const FaultInjection> injections, const PolicyConfig& policy,
                      double fouling_rate_kpa_per_s, double revenue_rate_per_s, std::uint64_t seed) {
  plan.validate();
  policy.validate();
  if (!(fouling_rate_kpa_per_s >= 0.0) || !std::isfinite(fouling_rate_kpa_per_s)) {
    throw ValidationError("run_policy: fouling rate must be finite and non-negative");
  }
  if (!(revenue_rate_per_s >= 0.0) || !std::isfinite(revenue_rate_per_s)) {
    throw ValidationError("run_policy: revenue rate must be finite and non-negative");
  }
  for (const auto& inj : injections) validate_injection(inj, plan);

  const Series base = generate_trace(plan, seed);

  struct SpikeState {
    SpikeRamp spec;
    bool done = false;
  };
  std::vector<SpikeState> spikes;
  std::vector<StuckAt> stucks;
  for (const auto& inj : injections) {
    if (const auto* s = std::get_if<SpikeRamp>(&inj)) {
      spikes.push_back({*s});
    } else {
      stucks.push_back(std::get<StuckAt>(inj));
    }
  }
  std::stable_sort(spikes.begin(), spikes.end(),
                   [](const SpikeState& a, const SpikeState& b) { return a.spec.at_s < b.spec.at_s; });
  std::vector<std::optional<double>> frozen(stucks.size());

  const auto* preventive = std::get_if<PreventivePolicy>(&policy.policy);
  const auto* predictive = std::get_if<PredictivePolicy>(&policy.policy);
  const BreakdownModel& bd = policy.breakdown;

  SimOutcome out;
  out.policy_name = policy.name;
  out.kind = policy.kind();
  out.duration_s = plan.duration_s;

  std::size_t down_remaining = 0;
  std::size_t age_s = 0;       // running seconds since the last maintenance or repair
  std::size_t above_s = 0;     // consecutive running seconds above the fail limit
  bool booked = false;
  std::size_t booked_start = 0;
  std::ptrdiff_t active_spike = -1;
  std::size_t spike_started = 0;
  double spike_p0 = 0.0;
  std::vector<double> history;  // observed readings since the last restart
  rng::Stream plateau_noise(rng::derive_seed(seed, kSpikeStream, 1));

  auto reset_after_intervention = [&] {
    age_s = 0;
    above_s = 0;
    booked = false;
    if (active_spike >= 0) spikes[static_cast<std::size_t>(active_spike)].done = true;
    active_spike = -1;
    history.clear();
  };

  for (std::size_t t = 0; t < plan.duration_s; ++t) {
    if (down_remaining > 0) {
      --down_remaining;
      ++out.downtime_s;
      continue;
    }

    const double clean = base.values[t] + fouling_rate_kpa_per_s * static_cast<double>(age_s);
    for (std::size_t i = 0; i < spikes.size(); ++i) {
      if (!spikes[i].done && static_cast<std::ptrdiff_t>(i) != active_spike && spikes[i].spec.at_s <= t) {
        if (active_spike >= 0) spikes[static_cast<std::size_t>(active_spike)].done = true;
        active_spike = static_cast<std::ptrdiff_t>(i);
        spike_started = t;
        spike_p0 = history.empty() ? clean : history.back();
      }
    }
    double pressure = clean;
    if (active_spike >= 0) {
      const SpikeRamp& sp = spikes[static_cast<std::size_t>(active_spike)].spec;
      const std::size_t since = t - spike_started;
      if (since <= sp.rise_s) {
        const double frac = sp.rise_s == 0 ? 1.0 : static_cast<double>(since) / static_cast<double>(sp.rise_s);
        pressure = spike_p0 + (sp.peak_kpa - spike_p0) * frac;
      } else {
        pressure = sp.peak_kpa + (sp.hold_sigma_kpa > 0.0 ? plateau_noise.normal(0.0, sp.hold_sigma_kpa) : 0.0);
      }
    }

    double observed = pressure;
    for (std::size_t i = 0; i < stucks.size(); ++i) {
      if (t >= stucks[i].at_s && t < stucks[i].at_s + stucks[i].duration_s) {
        if (!frozen[i]) frozen[i] = pressure;
        observed = *frozen[i];
      }
    }

    ++out.uptime_s;
    ++age_s;
    history.push_back(observed);

    above_s = pressure > bd.fail_limit_kpa ? above_s + 1 : 0;
    if (above_s > bd.grace_s) {
      ++out.breakdown_count;
      out.breakdown_starts.push_back(t + 1);
      down_remaining = bd.repair_duration_s;
      reset_after_intervention();
      continue;
    }

    bool maintain = false;
    std::size_t maint_duration = 0;
    if (preventive) {
      maintain = age_s >= preventive->cycle_s;
      maint_duration = preventive->maint_duration_s;
    } else if (predictive) {
      maint_duration = predictive->maint_duration_s;
      const TrainedModel& tm = *predictive->model;
      std::vector<double> forecast;
      if (history.size() >= tm.lags.max_lag) {
        forecast = forecast_horizon(tm, history, predictive->horizon_s);
      } else {
        forecast.assign(1, observed);  // persistence until the lag window refills
      }
      const auto directive = decide(forecast, predictive->limit_kpa, predictive->hard_limit_kpa, observed,
                                    static_cast<double>(predictive->schedule_window_s));
      if (directive.action == MaintenanceAction::HaltNow) {
        maintain = true;
      } else if (directive.action == MaintenanceAction::ScheduleWithin && !booked) {
        booked = true;
        booked_start = t + predictive->schedule_window_s;
      }
      if (booked && t + 1 >= booked_start) maintain = true;
    }

    if (maintain) {
      ++out.maintenance_count;
      out.maintenance_starts.push_back(t + 1);
      down_remaining = maint_duration;
      reset_after_intervention();
    }
  }

  out.revenue_units = static_cast<double>(out.uptime_s) * revenue_rate_per_s;
  return out;
}

const SimOutcome* ComparisonReport::find(PolicyKind kind) const noexcept {
  for (const auto& o : outcomes) {
    if (o.kind == kind) return &o;
  }
  return nullptr;
}

ComparisonReport compare_policies(const Scenario& scenario, std::uint64_t seed) {
  if (scenario.policies.size() < 2) throw ValidationError("compare_policies: at least two policies are required");
  ComparisonReport report;
  report.econ = scenario.econ;
  for (const auto& p : scenario.policies) {
    report.outcomes.push_back(run_policy(scenario.trace, scenario.injections, p, scenario.fouling_rate_kpa_per_s,
                                         scenario.econ.revenue_rate_per_s, seed));
  }
  const SimOutcome& ref = report.outcomes.front();
  for (const auto& o : report.outcomes) {
    report.deltas.push_back(PolicyDelta{
        o.policy_name,
        static_cast<long long>(ref.downtime_s) - static_cast<long long>(o.downtime_s),
        static_cast<long long>(ref.maintenance_count) - static_cast<long long>(o.maintenance_count),
        o.revenue_units - ref.revenue_units,
    });
  }
  return report;
}

std::string format_comparison_table(const ComparisonReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-11s %9s %11s %8s %11s %14s\n", "Policy", "Kind", "Uptime s", "Downtime s",
                "Maint", "Breakdowns", "Revenue");
  out << line << std::string(86, '-') << '\n';
  for (const auto& o : report.outcomes) {
    std::snprintf(line, sizeof line, "%-16s %-11s %9zu %11zu %8zu %11zu %14.2f\n", o.policy_name.c_str(),
                  std::string(policy_kind_name(o.kind)).c_str(), o.uptime_s, o.downtime_s, o.maintenance_count,
                  o.breakdown_count, o.revenue_units);
    out << line;
  }
  if (!report.outcomes.empty()) {
    out << "\nRelative to '" << report.outcomes.front().policy_name << "':\n";
    std::snprintf(line, sizeof line, "%-16s %18s %20s %16s\n", "Policy", "Downtime avoided s", "Maintenance avoided",
                  "Revenue delta");
    out << line;
    for (const auto& d : report.deltas) {
      std::snprintf(line, sizeof line, "%-16s %18lld %20lld %16.2f\n", d.policy_name.c_str(), d.downtime_avoided_s,
                    d.maintenance_avoided, d.revenue_delta);
      out << line;
    }
  }
  return out.str();
}

}  // namespace pdm
