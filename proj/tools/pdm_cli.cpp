// pdm: command-line driver for the predictive-maintenance toolkit.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pdm/cba.hpp"
#include "pdm/detect.hpp"
#include "pdm/error.hpp"
#include "pdm/features.hpp"
#include "pdm/ingest.hpp"
#include "pdm/models/evaluate.hpp"
#include "pdm/models/forecast_model.hpp"
#include "pdm/plantsim.hpp"
#include "pdm/rng.hpp"
#include "pdm/serialize.hpp"
#include "pdm/util.hpp"

namespace fs = std::filesystem;
using pdm::ValidationError;
using pdm::io::Json;

namespace {

struct Common {
  std::string out_dir = ".";
  std::vector<std::string> formats{"json", "table"};
  std::optional<std::uint64_t> seed;
  std::string config;

  bool wants(const char* f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

  std::uint64_t require_seed(const char* command) const {
    if (!seed) throw ValidationError(std::string(command) + ": --seed is required");
    return *seed;
  }

  fs::path out(const char* name) const { return fs::path(out_dir) / name; }

  void write(const char* name, const std::string& text) const {
    pdm::write_file_atomic(out(name), text);
  }

  void table(const char* name, const std::string& text) const {
    if (!wants("table")) return;
    write(name, text);
    std::cout << text;
  }
};

void add_common(CLI::App* sub, Common& c, bool seeded, bool structured_config = true) {
  sub->add_option("--out-dir", c.out_dir, "Output directory")->envname("PDM_OUT_DIR");
  sub->add_option("--format", c.formats, "Report formats (json, csv, table)")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "table"}));
  if (seeded) sub->add_option("--seed", c.seed, "Master seed (required)");
  if (structured_config) sub->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
}

// Config document with the allowed top-level sections; absent file = {}.
Json load_config(const std::string& path, const std::set<std::string>& sections) {
  if (path.empty()) return Json::object();
  Json doc = pdm::io::parse(pdm::read_file(path), path);
  pdm::io::check_schema(doc, path);
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "schema_version" && !sections.count(it.key())) {
      throw ValidationError(path + ": unknown field '" + it.key() + "'");
    }
  }
  return doc;
}

pdm::IngestConfig ingest_section(const Json& doc, const std::string& path) {
  return doc.contains("ingest") ? pdm::io::ingest_config_from_json(doc["ingest"], path + ": ingest") : pdm::IngestConfig{};
}

pdm::Series load_series(const std::string& input, const std::string& channel, const pdm::IngestConfig& cfg) {
  auto result = pdm::load_historian_csv(input, cfg);
  return pdm::select_channel(result.frame, channel);
}

struct ModelSetup {
  pdm::LagSpec lags;
  pdm::ModelParams params;
};

ModelSetup model_setup(const Json& doc, const std::string& path) {
  ModelSetup s;
  if (doc.contains("lags")) s.lags = pdm::io::lag_spec_from_json(doc["lags"], path + ": lags");
  if (doc.contains("params")) s.params = pdm::io::model_params_from_json(doc["params"], path + ": params");
  return s;
}

// --- commands ---------------------------------------------------------------

int cmd_ingest(const Common& c, const std::string& input) {
  const Json doc = load_config(c.config, {"ingest"});
  const auto cfg = ingest_section(doc, c.config);
  const auto result = pdm::load_historian_csv(input, cfg);
  c.write("cleaned.csv", pdm::to_historian_csv(result.frame));
  if (c.wants("json")) c.write("ingest_report.json", pdm::io::dump(pdm::io::to_json(result.report)));
  const auto& r = result.report;
  c.table("ingest_report.txt", "rows read               " + std::to_string(r.rows_read) +
                                   "\ndropped (sentinel)      " + std::to_string(r.rows_dropped_sentinel) +
                                   "\ndropped (unparseable)   " + std::to_string(r.rows_dropped_unparseable) +
                                   "\nchannels retained       " + std::to_string(r.channels_retained) +
                                   "\nrows kept               " + std::to_string(r.n_rows) + "\n");
  return 0;
}

int cmd_synth(const Common& c) {
  const std::uint64_t seed = c.require_seed("synth");
  const Json doc = load_config(c.config, {"trace", "injections"});
  pdm::TracePlan plan;
  if (doc.contains("trace")) plan = pdm::io::trace_plan_from_json(doc["trace"], c.config + ": trace");
  pdm::Series series = pdm::generate_trace(plan, seed);
  if (doc.contains("injections")) {
    const Json& inj = doc["injections"];
    if (!inj.is_array()) throw ValidationError(c.config + ": injections: expected an array");
    for (std::size_t i = 0; i < inj.size(); ++i) {
      const std::string where = c.config + ": injections[" + std::to_string(i) + "]";
      const auto injection = pdm::io::injection_from_json(inj[i], where);
      try {
        pdm::validate_injection(injection, plan);
      } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
      }
      series = pdm::inject_fault(std::move(series), injection, pdm::rng::derive_seed(seed, 1, i));
    }
  }
  c.write("trace.csv", pdm::to_historian_csv(pdm::frame_from_series(series)));
  if (c.wants("table")) {
    std::cout << "wrote " << c.out("trace.csv").string() << " (" << series.size() << " samples, channel "
              << series.name << ")\n";
  }
  return 0;
}

int cmd_train(const Common& c, const std::string& input, const std::string& channel, const std::string& kind) {
  const std::uint64_t seed = c.require_seed("train");
  const Json doc = load_config(c.config, {"lags", "params", "ingest"});
  const auto setup = model_setup(doc, c.config);
  const auto series = load_series(input, channel, ingest_section(doc, c.config));
  const auto trained =
      pdm::train_on_series(series.values, channel, setup.lags, pdm::parse_model_kind(kind), setup.params, seed);
  c.write("model.json", pdm::io::dump(pdm::io::to_json(trained)));
  if (c.wants("table")) {
    std::cout << "trained " << pdm::model_kind_label(trained.model.kind()) << " on " << series.size()
              << " samples of " << channel << " -> " << c.out("model.json").string() << "\n";
  }
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& input, const std::string& channel,
                 const std::vector<std::string>& kinds, std::size_t k) {
  const std::uint64_t seed = c.require_seed("evaluate");
  const Json doc = load_config(c.config, {"lags", "params", "ingest"});
  const auto setup = model_setup(doc, c.config);
  const auto series = load_series(input, channel, ingest_section(doc, c.config));
  const auto set = pdm::make_lag_matrix(series.values, setup.lags);
  const auto plan = pdm::walk_forward_splits(set.rows(), k);
  std::vector<pdm::EvalReport> reports;
  for (const auto& name : kinds) {
    reports.push_back(pdm::evaluate_cv(set, plan, pdm::parse_model_kind(name), setup.params, seed));
  }
  if (c.wants("json")) c.write("eval_report.json", pdm::io::dump(pdm::io::to_json(reports, k, seed)));
  if (c.wants("csv")) c.write("eval_report.csv", pdm::io::eval_reports_csv(reports));
  c.table("eval_report.txt", pdm::format_eval_table(reports));
  return 0;
}

int cmd_detect(const Common& c, const std::string& input, const std::string& channel) {
  const Json doc = load_config(c.config, {"detector", "ingest"});
  pdm::DetectorConfig cfg;
  if (doc.contains("detector")) cfg = pdm::io::detector_config_from_json(doc["detector"], c.config + ": detector");
  const auto series = load_series(input, channel, ingest_section(doc, c.config));
  const auto events = pdm::detect_all(series.values, cfg);
  if (c.wants("json")) c.write("events.jsonl", pdm::io::events_jsonl(events));
  if (c.wants("csv")) c.write("events.csv", pdm::io::events_csv(events));
  c.table("events.txt", pdm::format_event_summary(events));
  return 0;
}

int cmd_simulate(const Common& c, const std::string& scenario_path, const std::string& model_path) {
  const std::uint64_t seed = c.require_seed("simulate");
  pdm::io::Json doc = pdm::io::parse(pdm::read_file(scenario_path), scenario_path);
  pdm::Scenario scenario = pdm::io::scenario_from_json(doc, scenario_path);

  std::shared_ptr<const pdm::TrainedModel> model;
  if (!model_path.empty()) {
    model = std::make_shared<const pdm::TrainedModel>(
        pdm::io::trained_model_from_json(pdm::io::parse(pdm::read_file(model_path), model_path), model_path));
  }
  for (auto& p : scenario.policies) {
    auto* pred = std::get_if<pdm::PredictivePolicy>(&p.policy);
    if (!pred) continue;
    if (!model) {
      // Default: a linear model fitted to a fault-free run of the scenario trace.
      const auto history = pdm::generate_trace(scenario.trace, pdm::rng::derive_seed(seed, 2));
      model = std::make_shared<const pdm::TrainedModel>(pdm::train_on_series(
          history.values, scenario.trace.channel, pdm::LagSpec{}, pdm::ModelKind::Linear, pdm::ModelParams{}, seed));
    }
    pred->model = model;
  }
  const auto report = pdm::compare_policies(scenario, seed);
  if (c.wants("json")) c.write("comparison.json", pdm::io::dump(pdm::io::to_json(report)));
  if (c.wants("csv")) c.write("comparison.csv", pdm::io::comparison_csv(report));
  c.table("comparison.txt", pdm::format_comparison_table(report));
  return 0;
}

int cmd_cba(const Common& c, const std::string& ledger_path, const std::string& comparison_path,
            std::optional<std::size_t> trials) {
  const std::uint64_t seed = c.require_seed("cba");
  const Json doc = load_config(c.config, {"monte_carlo"});
  pdm::cba::McConfig mc;
  if (doc.contains("monte_carlo")) mc = pdm::io::mc_config_from_json(doc["monte_carlo"], c.config + ": monte_carlo");
  if (trials) mc.trials = *trials;
  mc.seed = seed;
  auto ledger = pdm::cba::load_ledger(ledger_path);
  if (!comparison_path.empty()) {
    const auto comparison = pdm::io::comparison_from_json(
        pdm::io::parse(pdm::read_file(comparison_path), comparison_path), comparison_path);
    ledger = pdm::cba::bridge_from_simulation(comparison, comparison.econ.revenue_rate_per_s,
                                              comparison.econ.unit_maintenance_cost, std::move(ledger));
  }
  const auto result = pdm::cba::net_benefit(ledger, mc);
  if (c.wants("json")) c.write("net_benefit.json", pdm::io::dump(pdm::io::to_json(result, ledger)));
  if (c.wants("csv")) c.write("net_benefit.csv", pdm::io::net_benefit_csv(result));
  c.table("net_benefit.txt", pdm::cba::format_net_benefit_table(result));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive maintenance toolkit: ingest, forecast, detect, simulate, cost-benefit"};
  app.require_subcommand(1);

  Common common;
  std::string input, channel = "DPIT301", model_kind = "linear", scenario, model_path, ledger, comparison;
  std::vector<std::string> kinds{"linear", "forest", "boost"};
  std::size_t k = 5;
  std::optional<std::size_t> trials;

  auto* ingest = app.add_subcommand("ingest", "Clean a historian CSV export");
  add_common(ingest, common, false);
  ingest->add_option("--input", input, "Historian CSV")->required()->check(CLI::ExistingFile);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic pressure trace");
  add_common(synth, common, true);

  auto* train = app.add_subcommand("train", "Fit a forecasting model");
  add_common(train, common, true);
  train->add_option("--input", input, "Historian CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--channel", channel, "Channel to model");
  train->add_option("--model", model_kind, "linear, forest or boost")->check(CLI::IsMember({"linear", "forest", "boost"}));

  auto* evaluate = app.add_subcommand("evaluate", "Walk-forward cross-validation");
  add_common(evaluate, common, true);
  evaluate->add_option("--input", input, "Historian CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--channel", channel, "Channel to model");
  evaluate->add_option("--models", kinds, "Model kinds")->delimiter(',')->check(CLI::IsMember({"linear", "forest", "boost"}));
  evaluate->add_option("-k,--splits", k, "Number of splits");

  auto* detect = app.add_subcommand("detect", "Run the fault detectors");
  add_common(detect, common, false);
  detect->add_option("--input", input, "Historian CSV")->required()->check(CLI::ExistingFile);
  detect->add_option("--channel", channel, "Channel to scan");

  auto* simulate = app.add_subcommand("simulate", "Compare maintenance policies");
  add_common(simulate, common, true, false);
  simulate->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--model", model_path, "Trained model JSON for predictive policies")->check(CLI::ExistingFile);

  auto* cba = app.add_subcommand("cba", "Monte Carlo cost-benefit analysis");
  add_common(cba, common, true);
  cba->add_option("--ledger", ledger, "Ledger JSON")->required()->check(CLI::ExistingFile);
  cba->add_option("--comparison", comparison, "comparison.json to bridge into the ledger")->check(CLI::ExistingFile);
  cba->add_option("--trials", trials, "Monte Carlo trials (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ingest) return cmd_ingest(common, input);
    if (*synth) return cmd_synth(common);
    if (*train) return cmd_train(common, input, channel, model_kind);
    if (*evaluate) return cmd_evaluate(common, input, channel, kinds, k);
    if (*detect) return cmd_detect(common, input, channel);
    if (*simulate) return cmd_simulate(common, scenario, model_path);
    if (*cba) return cmd_cba(common, ledger, comparison, trials);
  } catch (const ValidationError& e) {
    std::cerr << "pdm: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pdm: failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
