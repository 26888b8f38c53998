#pragma once

// JSON and CSV encodings of configs, models and reports. Every JSON document
// carries "schema_version"; objects are emitted with sorted keys so equal
// values always produce identical bytes.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdm/cba.hpp"
#include "pdm/detect.hpp"
#include "pdm/features.hpp"
#include "pdm/ingest.hpp"
#include "pdm/models/evaluate.hpp"
#include "pdm/models/forecast_model.hpp"
#include "pdm/plantsim.hpp"

namespace pdm::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Pretty-printed, trailing newline.
std::string dump(const Json& doc);
// Throws ValidationError naming `source` on malformed input.
Json parse(std::string_view text, const std::string& source);
// Rejects documents whose schema_version is present and not kSchemaVersion.
void check_schema(const Json& doc, const std::string& source);

// Config readers reject unknown keys; missing keys keep their defaults.
IngestConfig ingest_config_from_json(const Json& j, const std::string& where);
Json to_json(const IngestReport& report);

LagSpec lag_spec_from_json(const Json& j, const std::string& where);
Json to_json(const LagSpec& lags);

ModelParams model_params_from_json(const Json& j, const std::string& where);
Json to_json(const ModelParams& params);

Json to_json(const TrainedModel& model);
TrainedModel trained_model_from_json(const Json& j, const std::string& where);

Json to_json(std::span<const EvalReport> reports, std::size_t k, std::uint64_t seed);
std::string eval_reports_csv(std::span<const EvalReport> reports);

DetectorConfig detector_config_from_json(const Json& j, const std::string& where);
Json to_json(const FaultEvent& event);
// One compact JSON object per line.
std::string events_jsonl(std::span<const FaultEvent> events);
std::string events_csv(std::span<const FaultEvent> events);

TracePlan trace_plan_from_json(const Json& j, const std::string& where);
Json to_json(const TracePlan& plan);
FaultInjection injection_from_json(const Json& j, const std::string& where);
Json to_json(const FaultInjection& injection);

// Predictive policies are returned without a model; the caller attaches one.
Scenario scenario_from_json(const Json& j, const std::string& where);

Json to_json(const ComparisonReport& report);
ComparisonReport comparison_from_json(const Json& j, const std::string& where);
std::string comparison_csv(const ComparisonReport& report);

cba::McConfig mc_config_from_json(const Json& j, const std::string& where);
Json to_json(const cba::McSummary& summary);
Json to_json(const cba::LineItem& item);
Json to_json(const cba::NetBenefitResult& result, std::span<const cba::LineItem> ledger);
std::string net_benefit_csv(const cba::NetBenefitResult& result);

}  // namespace pdm::io
