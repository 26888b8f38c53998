#pragma once

// Synthetic differential-pressure traces and a discrete-time plant simulator
// comparing preventive, predictive and corrective maintenance policies.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pdm/detect.hpp"
#include "pdm/ingest.hpp"
#include "pdm/models/forecast_model.hpp"

namespace pdm {

struct TraceSegment {
  std::size_t offset_s = 0;
  double setpoint_kpa = 0.0;

  bool operator==(const TraceSegment&) const = default;
};

// The five DPIT setpoint changes of the reference experiment (at 15:44, 15:54,
// 16:05, 16:17 and 16:34), as offsets from a 15:24 start, i.e. the first
// change lands at the end of the 20 minute warm-up.
std::vector<TraceSegment> table1_segments();

// 2020-02-26T15:24:00Z.
inline constexpr std::int64_t kTable1StartEpoch = 1582730640;

struct TracePlan {
  std::size_t duration_s = 8700;
  double baseline_kpa = 30.0;
  std::vector<TraceSegment> segments = table1_segments();
  double noise_sigma_kpa = 0.2;
  std::size_t warmup_s = 1200;  // linear ramp from 0 to baseline
  std::int64_t start_epoch = kTable1StartEpoch;
  std::string channel = "DPIT301";

  void validate() const;
};

// Linear ramp from the preceding value to peak over rise_s seconds, then a
// plateau at peak (optionally noisy) until cleared by maintenance or repair.
struct SpikeRamp {
  std::size_t at_s = 0;
  double peak_kpa = 0.0;
  std::size_t rise_s = 0;
  double hold_sigma_kpa = 0.0;

  bool operator==(const SpikeRamp&) const = default;
};

// Sensor reading frozen at its value at at_s for duration_s seconds.
struct StuckAt {
  std::size_t at_s = 0;
  std::size_t duration_s = 0;

  bool operator==(const StuckAt&) const = default;
};

using FaultInjection = std::variant<SpikeRamp, StuckAt>;

// Throws ValidationError if the injection does not fit the plan.
void validate_injection(const FaultInjection& injection, const TracePlan& plan);

Series generate_trace(const TracePlan& plan, std::uint64_t seed);

// Standalone injection into an existing series (the spike plateau holds to the
// end of the series).
Series inject_fault(Series series, const FaultInjection& injection, std::uint64_t seed);

struct PreventivePolicy {
  std::size_t cycle_s = 1800;  // running seconds between maintenance
  std::size_t maint_duration_s = 300;
};

struct PredictivePolicy {
  std::shared_ptr<const TrainedModel> model;
  double limit_kpa = kDefaultLimitKpa;
  double hard_limit_kpa = kDefaultHardLimitKpa;
  std::size_t horizon_s = 5;
  std::size_t schedule_window_s = 300;
  std::size_t maint_duration_s = 300;
};

// Run to failure: only breakdown repairs.
struct CorrectivePolicy {};

enum class PolicyKind { Preventive, Predictive, Corrective };
std::string_view policy_kind_name(PolicyKind kind);

// Pressure above fail_limit_kpa for more than grace_s consecutive running
// seconds is a breakdown: the plant is down for repair_duration_s.
struct BreakdownModel {
  double fail_limit_kpa = 50.0;
  std::size_t grace_s = 30;
  std::size_t repair_duration_s = 3600;
};

struct PolicyConfig {
  std::string name;
  std::variant<PreventivePolicy, PredictivePolicy, CorrectivePolicy> policy;
  BreakdownModel breakdown;

  PolicyKind kind() const noexcept { return static_cast<PolicyKind>(policy.index()); }
  void validate() const;
};

struct SimOutcome {
  std::string policy_name;
  PolicyKind kind = PolicyKind::Preventive;
  std::size_t duration_s = 0;
  std::size_t uptime_s = 0;
  std::size_t downtime_s = 0;
  std::size_t maintenance_count = 0;
  std::size_t breakdown_count = 0;
  double revenue_units = 0.0;  // uptime_s * revenue rate
  std::vector<std::size_t> maintenance_starts;
  std::vector<std::size_t> breakdown_starts;

  bool operator==(const SimOutcome&) const = default;
};

// Steps the plant second by second. Pressure = trace value + fouling_rate *
// running seconds since the last maintenance, overridden by an active spike.
// Maintenance and repair halt production, reset fouling and clear spikes.
SimOutcome run_policy(const TracePlan& plan, std::span<const FaultInjection> injections, const PolicyConfig& policy,
                      double fouling_rate_kpa_per_s, double revenue_rate_per_s, std::uint64_t seed);

struct Economics {
  double revenue_rate_per_s = 1.0;
  double unit_maintenance_cost = 0.0;
};

struct Scenario {
  TracePlan trace;
  std::vector<FaultInjection> injections;
  double fouling_rate_kpa_per_s = 0.0;
  Economics econ;
  std::vector<PolicyConfig> policies;
};

// Deltas of a policy relative to the reference (first) policy; positive
// values favour the policy.
struct PolicyDelta {
  std::string policy_name;
  long long downtime_avoided_s = 0;
  long long maintenance_avoided = 0;
  double revenue_delta = 0.0;

  bool operator==(const PolicyDelta&) const = default;
};

struct ComparisonReport {
  std::vector<SimOutcome> outcomes;
  std::vector<PolicyDelta> deltas;
  Economics econ;

  const SimOutcome* find(PolicyKind kind) const noexcept;
};

// Runs every policy on the same trace and seed.
ComparisonReport compare_policies(const Scenario& scenario, std::uint64_t seed);

std::string format_comparison_table(const ComparisonReport& report);

}  // namespace pdm
