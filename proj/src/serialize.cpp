#include "pdm/serialize.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "pdm/error.hpp"
#include "pdm/util.hpp"

namespace pdm::io {
namespace {

// Reads fields of one JSON object and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError(where_ + ": expected an object");
  }

  const std::string& where() const { return where_; }
  std::string at(std::string_view key) const { return where_ + "." + std::string(key); }

  const Json* find(const char* key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& require(const char* key) {
    const Json* v = find(key);
    if (!v) throw ValidationError(where_ + ": missing field '" + key + "'");
    return *v;
  }

  void read(const char* key, double& out) {
    if (const Json* v = find(key)) out = as_double(*v, at(key));
  }
  void read(const char* key, std::size_t& out) {
    if (const Json* v = find(key)) out = as_size(*v, at(key));
  }
  void read(const char* key, std::int64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) throw ValidationError(at(key) + ": expected an integer");
      out = v->get<std::int64_t>();
    }
  }
  void read_u64(const char* key, std::uint64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
        throw ValidationError(at(key) + ": expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) throw ValidationError(at(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) throw ValidationError(at(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }
  void read(const char* key, std::vector<std::string>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array()) throw ValidationError(at(key) + ": expected an array of strings");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_string()) throw ValidationError(at(key) + ": expected an array of strings");
        out.push_back(e.get<std::string>());
      }
    }
  }
  void read(const char* key, std::optional<double>& out) {
    if (const Json* v = find(key)) out = v->is_null() ? std::nullopt : std::optional<double>(as_double(*v, at(key)));
  }
  void read(const char* key, std::optional<std::size_t>& out) {
    if (const Json* v = find(key)) {
      out = v->is_null() ? std::nullopt : std::optional<std::size_t>(as_size(*v, at(key)));
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!known_.count(it.key())) throw ValidationError(where_ + ": unknown field '" + it.key() + "'");
    }
  }

  static double as_double(const Json& v, const std::string& where) {
    if (!v.is_number()) throw ValidationError(where + ": expected a number");
    return v.get<double>();
  }
  static std::size_t as_size(const Json& v, const std::string& where) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ValidationError(where + ": expected a non-negative integer");
    }
    return static_cast<std::size_t>(v.get<std::uint64_t>());
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string, std::less<>> known_{"schema_version"};
};

template <class Fn>
auto with_context(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    throw ValidationError(where + ": " + msg);
  }
}

Json range_json(const IndexRange& r) { return Json::array({r.begin, r.end}); }

Json tree_params_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth ? Json(*p.max_depth) : Json(nullptr)}, {"min_samples_leaf", p.min_samples_leaf}};
}

TreeParams tree_params_from(const Json& j, const std::string& where) {
  Reader r(j, where);
  TreeParams p;
  r.read("max_depth", p.max_depth);
  r.read("min_samples_leaf", p.min_samples_leaf);
  r.finish();
  return p;
}

Json tree_json(const RegressionTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes) nodes.push_back(Json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  return nodes;
}

RegressionTree tree_from(const Json& j, const TreeParams& params, std::size_t n_features, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a non-empty node array");
  RegressionTree t;
  t.params = params;
  t.n_features = n_features;
  const auto n = static_cast<std::int64_t>(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 5 || !e[0].is_number_integer() || !e[2].is_number_integer() ||
        !e[3].is_number_integer() || !e[1].is_number() || !e[4].is_number()) {
      throw ValidationError(w + ": expected [feature, threshold, left, right, value]");
    }
    TreeNode node{e[0].get<std::int32_t>(), e[1].get<double>(), e[2].get<std::int32_t>(), e[3].get<std::int32_t>(),
                  e[4].get<double>()};
    if (node.feature >= 0) {
      const auto self = static_cast<std::int64_t>(i);
      if (static_cast<std::size_t>(node.feature) >= n_features || node.left <= self || node.right <= self ||
          node.left >= n || node.right >= n) {
        throw ValidationError(w + ": split node references an invalid feature or child");
      }
    } else if (node.feature != -1) {
      throw ValidationError(w + ": feature must be -1 (leaf) or a feature index");
    }
    t.nodes.push_back(node);
  }
  return t;
}

std::vector<double> doubles_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(Reader::as_double(e, where));
  return out;
}

std::vector<std::size_t> sizes_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of integers");
  std::vector<std::size_t> out;
  for (const auto& e : j) out.push_back(Reader::as_size(e, where));
  return out;
}

Json forest_params_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees}, {"tree", tree_params_json(p.tree)}, {"bootstrap", p.bootstrap}};
}

Json boost_params_json(const BoostParams& p) {
  return {{"n_stages", p.n_stages},
          {"learning_rate", p.learning_rate},
          {"tree", tree_params_json(p.tree)},
          {"subsample", p.subsample}};
}

Json amount_json(const cba::AmountSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, cba::Point>) {
          return {{"dist", "point"}, {"value", s.value}};
        } else if constexpr (std::is_same_v<T, cba::Uniform>) {
          return {{"dist", "uniform"}, {"min", s.min}, {"max", s.max}};
        } else if constexpr (std::is_same_v<T, cba::Triangular>) {
          return {{"dist", "triangular"}, {"min", s.min}, {"mode", s.mode}, {"max", s.max}};
        } else {
          return {{"dist", "normal"}, {"mu", s.mu}, {"sigma", s.sigma}};
        }
      },
      spec);
}

PolicyKind parse_policy_kind(const std::string& s, const std::string& where) {
  if (s == "preventive") return PolicyKind::Preventive;
  if (s == "predictive") return PolicyKind::Predictive;
  if (s == "corrective") return PolicyKind::Corrective;
  throw ValidationError(where + ": unknown policy type '" + s + "' (expected preventive, predictive or corrective)");
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ": invalid JSON: " + e.what());
  }
}

void check_schema(const Json& doc, const std::string& source) {
  if (!doc.is_object()) throw ValidationError(source + ": top level must be an object");
  auto it = doc.find("schema_version");
  if (it != doc.end() && !(it->is_number_integer() && it->get<int>() == kSchemaVersion)) {
    throw ValidationError(source + ": unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

// --- ingest ---------------------------------------------------------------

IngestConfig ingest_config_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  IngestConfig c;
  r.read("sentinel_tokens", c.sentinel_tokens);
  r.read("timestamp_formats", c.timestamp_formats);
  r.read("exclude_columns", c.exclude_columns);
  r.finish();
  with_context(where, [&] { c.validate(); return 0; });
  return c;
}

Json to_json(const IngestReport& report) {
  return {{"schema_version", kSchemaVersion},
          {"rows_read", report.rows_read},
          {"rows_dropped_sentinel", report.rows_dropped_sentinel},
          {"rows_dropped_unparseable", report.rows_dropped_unparseable},
          {"channels_retained", report.channels_retained},
          {"n_rows", report.n_rows}};
}

// --- models ---------------------------------------------------------------

LagSpec lag_spec_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  LagSpec l;
  r.read("min_lag", l.min_lag);
  r.read("max_lag", l.max_lag);
  r.finish();
  with_context(where, [&] { l.validate(); return 0; });
  return l;
}

Json to_json(const LagSpec& lags) { return {{"min_lag", lags.min_lag}, {"max_lag", lags.max_lag}}; }

ModelParams model_params_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  ModelParams p;
  if (const Json* f = r.find("forest")) {
    Reader fr(*f, r.at("forest"));
    fr.read("n_trees", p.forest.n_trees);
    fr.read("bootstrap", p.forest.bootstrap);
    fr.read("n_threads", p.forest.n_threads);
    if (const Json* t = fr.find("tree")) p.forest.tree = tree_params_from(*t, fr.at("tree"));
    fr.finish();
    with_context(fr.where(), [&] { p.forest.validate(); return 0; });
  }
  if (const Json* b = r.find("boost")) {
    Reader br(*b, r.at("boost"));
    br.read("n_stages", p.boost.n_stages);
    br.read("learning_rate", p.boost.learning_rate);
    br.read("subsample", p.boost.subsample);
    if (const Json* t = br.find("tree")) p.boost.tree = tree_params_from(*t, br.at("tree"));
    br.finish();
    with_context(br.where(), [&] { p.boost.validate(); return 0; });
  }
  r.finish();
  return p;
}

Json to_json(const ModelParams& params) {
  return {{"forest", forest_params_json(params.forest)}, {"boost", boost_params_json(params.boost)}};
}

Json to_json(const TrainedModel& tm) {
  Json j{{"schema_version", kSchemaVersion},
         {"kind", model_kind_name(tm.model.kind())},
         {"channel", tm.channel},
         {"lags", to_json(tm.lags)},
         {"seed", tm.seed},
         {"n_features", tm.model.n_features()}};
  const auto& impl = tm.model.impl();
  if (const auto* lin = std::get_if<LinearModel>(&impl)) {
    j["linear"] = {{"intercept", lin->intercept}, {"coefficients", lin->coefficients}, {"ridge_applied", lin->ridge_applied}};
  } else if (const auto* f = std::get_if<ForestModel>(&impl)) {
    Json trees = Json::array();
    for (const auto& t : f->trees) trees.push_back(tree_json(t));
    j["params"] = forest_params_json(f->params);
    j["forest"] = {{"trees", std::move(trees)}};
  } else {
    const auto& b = std::get<BoostModel>(impl);
    Json stages = Json::array();
    for (const auto& t : b.stages) stages.push_back(tree_json(t));
    j["params"] = boost_params_json(b.params);
    j["boost"] = {{"init_value", b.init_value}, {"stages", std::move(stages)}, {"training_rmse", b.training_rmse}};
  }
  return j;
}

TrainedModel trained_model_from_json(const Json& j, const std::string& where) {
  check_schema(j, where);
  Reader r(j, where);
  std::string kind_name;
  r.read("kind", kind_name);
  const ModelKind kind = with_context(r.at("kind"), [&] { return parse_model_kind(kind_name); });
  std::string channel;
  r.read("channel", channel);
  const LagSpec lags = lag_spec_from_json(r.require("lags"), r.at("lags"));
  std::uint64_t seed = 0;
  r.read_u64("seed", seed);
  std::size_t n_features = 0;
  r.read("n_features", n_features);
  if (n_features != lags.count()) {
    throw ValidationError(where + ": n_features " + std::to_string(n_features) + " does not match lags (" +
                          std::to_string(lags.count()) + ")");
  }
  ModelParams params;
  auto model = [&]() -> ForecastModel {
    switch (kind) {
      case ModelKind::Linear: {
        Reader lr(r.require("linear"), r.at("linear"));
        LinearModel m;
        lr.read("intercept", m.intercept);
        m.coefficients = doubles_from(lr.require("coefficients"), lr.at("coefficients"));
        lr.read("ridge_applied", m.ridge_applied);
        lr.finish();
        if (m.coefficients.size() != n_features) {
          throw ValidationError(lr.at("coefficients") + ": expected " + std::to_string(n_features) + " values");
        }
        return m;
      }
      case ModelKind::Forest: {
        params = model_params_from_json(Json{{"forest", r.require("params")}}, where);
        ForestModel m;
        m.params = params.forest;
        m.seed = seed;
        m.n_features = n_features;
        Reader fr(r.require("forest"), r.at("forest"));
        const Json& trees = fr.require("trees");
        fr.finish();
        if (!trees.is_array() || trees.empty()) throw ValidationError(fr.at("trees") + ": expected a non-empty array");
        for (std::size_t i = 0; i < trees.size(); ++i) {
          m.trees.push_back(tree_from(trees[i], m.params.tree, n_features, fr.at("trees") + "[" + std::to_string(i) + "]"));
        }
        return m;
      }
      case ModelKind::Boost: {
        params = model_params_from_json(Json{{"boost", r.require("params")}}, where);
        BoostModel m;
        m.params = params.boost;
        m.seed = seed;
        m.n_features = n_features;
        Reader br(r.require("boost"), r.at("boost"));
        br.read("init_value", m.init_value);
        const Json& stages = br.require("stages");
        m.training_rmse = doubles_from(br.require("training_rmse"), br.at("training_rmse"));
        br.finish();
        if (!stages.is_array()) throw ValidationError(br.at("stages") + ": expected an array");
        for (std::size_t i = 0; i < stages.size(); ++i) {
          m.stages.push_back(tree_from(stages[i], m.params.tree, n_features, br.at("stages") + "[" + std::to_string(i) + "]"));
        }
        return m;
      }
    }
    throw ValidationError(where + ": unknown model kind");
  }();
  r.finish();
  return TrainedModel{std::move(model), lags, std::move(channel), params, seed};
}

// --- evaluation -----------------------------------------------------------

Json to_json(std::span<const EvalReport> reports, std::size_t k, std::uint64_t seed) {
  Json list = Json::array();
  for (const auto& rep : reports) {
    Json folds = Json::array();
    for (std::size_t i = 0; i < rep.folds.size(); ++i) {
      folds.push_back({{"split", i + 1},
                       {"train", range_json(rep.folds[i].train)},
                       {"test", range_json(rep.folds[i].test)},
                       {"rmse", rep.per_split_rmse[i]}});
    }
    list.push_back({{"kind", model_kind_name(rep.kind)},
                    {"label", model_kind_label(rep.kind)},
                    {"lags", to_json(rep.lags)},
                    {"folds", std::move(folds)},
                    {"average_rmse", rep.average_rmse}});
  }
  return {{"schema_version", kSchemaVersion}, {"k", k}, {"seed", seed}, {"unit", "kPa"}, {"reports", std::move(list)}};
}

std::string eval_reports_csv(std::span<const EvalReport> reports) {
  std::string out = "model,split,train_begin,train_end,test_begin,test_end,rmse\n";
  for (const auto& rep : reports) {
    const std::string kind(model_kind_name(rep.kind));
    for (std::size_t i = 0; i < rep.folds.size(); ++i) {
      const auto& f = rep.folds[i];
      out += kind + "," + std::to_string(i + 1) + "," + std::to_string(f.train.begin) + "," + std::to_string(f.train.end) +
             "," + std::to_string(f.test.begin) + "," + std::to_string(f.test.end) + "," +
             format_double(rep.per_split_rmse[i]) + "\n";
    }
    out += kind + ",average,,,,," + format_double(rep.average_rmse) + "\n";
  }
  return out;
}

// --- detection ------------------------------------------------------------

DetectorConfig detector_config_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  DetectorConfig c;
  r.read("gradient_max_rate", c.gradient_max_rate);
  r.read("mad_window", c.mad_window);
  r.read("mad_k", c.mad_k);
  r.read("spike_window", c.spike_window);
  r.read("spike_min_rise", c.spike_min_rise);
  r.read("stuck_window", c.stuck_window);
  r.read("stuck_eps_var", c.stuck_eps_var);
  r.read("stuck_min_duration", c.stuck_min_duration);
  r.read("var_window", c.var_window);
  r.read("var_threshold", c.var_threshold);
  r.read("limit_kpa", c.limit_kpa);
  r.finish();
  with_context(where, [&] { c.validate(); return 0; });
  return c;
}

Json to_json(const FaultEvent& e) {
  return {{"kind", fault_kind_name(e.kind)}, {"start", e.start_index}, {"end", e.end_index}, {"severity", e.severity}};
}

std::string events_jsonl(std::span<const FaultEvent> events) {
  std::string out;
  for (const auto& e : events) out += to_json(e).dump() + "\n";
  return out;
}

std::string events_csv(std::span<const FaultEvent> events) {
  std::string out = "kind,start,end,severity\n";
  for (const auto& e : events) {
    out += std::string(fault_kind_name(e.kind)) + "," + std::to_string(e.start_index) + "," +
           std::to_string(e.end_index) + "," + format_double(e.severity) + "\n";
  }
  return out;
}

// --- plant simulation -----------------------------------------------------

TracePlan trace_plan_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  TracePlan p;
  r.read("duration_s", p.duration_s);
  r.read("baseline_kpa", p.baseline_kpa);
  r.read("noise_sigma_kpa", p.noise_sigma_kpa);
  r.read("warmup_s", p.warmup_s);
  r.read("start_epoch", p.start_epoch);
  r.read("channel", p.channel);
  if (const Json* s = r.find("segments")) {
    const std::string w = r.at("segments");
    if (!s->is_array()) throw ValidationError(w + ": expected an array");
    p.segments.clear();
    for (std::size_t i = 0; i < s->size(); ++i) {
      Reader sr((*s)[i], w + "[" + std::to_string(i) + "]");
      TraceSegment seg;
      seg.offset_s = Reader::as_size(sr.require("offset_s"), sr.at("offset_s"));
      seg.setpoint_kpa = Reader::as_double(sr.require("setpoint_kpa"), sr.at("setpoint_kpa"));
      sr.finish();
      p.segments.push_back(seg);
    }
  }
  r.finish();
  with_context(where, [&] { p.validate(); return 0; });
  return p;
}

Json to_json(const TracePlan& plan) {
  Json segs = Json::array();
  for (const auto& s : plan.segments) segs.push_back({{"offset_s", s.offset_s}, {"setpoint_kpa", s.setpoint_kpa}});
  return {{"duration_s", plan.duration_s},     {"baseline_kpa", plan.baseline_kpa}, {"segments", std::move(segs)},
          {"noise_sigma_kpa", plan.noise_sigma_kpa}, {"warmup_s", plan.warmup_s}, {"start_epoch", plan.start_epoch},
          {"channel", plan.channel}};
}

FaultInjection injection_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  std::string type;
  r.read("type", type);
  FaultInjection out;
  if (type == "spike_ramp") {
    SpikeRamp s;
    s.at_s = Reader::as_size(r.require("at_s"), r.at("at_s"));
    s.peak_kpa = Reader::as_double(r.require("peak_kpa"), r.at("peak_kpa"));
    r.read("rise_s", s.rise_s);
    r.read("hold_sigma_kpa", s.hold_sigma_kpa);
    out = s;
  } else if (type == "stuck_at") {
    StuckAt s;
    s.at_s = Reader::as_size(r.require("at_s"), r.at("at_s"));
    s.duration_s = Reader::as_size(r.require("duration_s"), r.at("duration_s"));
    out = s;
  } else {
    throw ValidationError(r.at("type") + ": expected 'spike_ramp' or 'stuck_at'");
  }
  r.finish();
  return out;
}

Json to_json(const FaultInjection& injection) {
  if (const auto* s = std::get_if<SpikeRamp>(&injection)) {
    return {{"type", "spike_ramp"}, {"at_s", s->at_s}, {"peak_kpa", s->peak_kpa}, {"rise_s", s->rise_s},
            {"hold_sigma_kpa", s->hold_sigma_kpa}};
  }
  const auto& st = std::get<StuckAt>(injection);
  return {{"type", "stuck_at"}, {"at_s", st.at_s}, {"duration_s", st.duration_s}};
}

Scenario scenario_from_json(const Json& j, const std::string& where) {
  check_schema(j, where);
  Reader r(j, where);
  Scenario sc;
  if (const Json* t = r.find("trace")) sc.trace = trace_plan_from_json(*t, r.at("trace"));
  if (const Json* inj = r.find("injections")) {
    if (!inj->is_array()) throw ValidationError(r.at("injections") + ": expected an array");
    for (std::size_t i = 0; i < inj->size(); ++i) {
      const std::string w = r.at("injections") + "[" + std::to_string(i) + "]";
      sc.injections.push_back(injection_from_json((*inj)[i], w));
      with_context(w, [&] { validate_injection(sc.injections.back(), sc.trace); return 0; });
    }
  }
  r.read("fouling_rate_kpa_per_s", sc.fouling_rate_kpa_per_s);
  if (const Json* e = r.find("economics")) {
    Reader er(*e, r.at("economics"));
    er.read("revenue_rate_per_s", sc.econ.revenue_rate_per_s);
    er.read("unit_maintenance_cost", sc.econ.unit_maintenance_cost);
    er.finish();
  }
  const Json& pols = r.require("policies");
  if (!pols.is_array()) throw ValidationError(r.at("policies") + ": expected an array");
  for (std::size_t i = 0; i < pols.size(); ++i) {
    Reader pr(pols[i], r.at("policies") + "[" + std::to_string(i) + "]");
    PolicyConfig pc;
    pr.read("name", pc.name);
    std::string type;
    pr.read("type", type);
    switch (parse_policy_kind(type, pr.at("type"))) {
      case PolicyKind::Preventive: {
        PreventivePolicy p;
        pr.read("cycle_s", p.cycle_s);
        pr.read("maint_duration_s", p.maint_duration_s);
        pc.policy = p;
        break;
      }
      case PolicyKind::Predictive: {
        PredictivePolicy p;
        pr.read("limit_kpa", p.limit_kpa);
        pr.read("hard_limit_kpa", p.hard_limit_kpa);
        pr.read("horizon_s", p.horizon_s);
        pr.read("schedule_window_s", p.schedule_window_s);
        pr.read("maint_duration_s", p.maint_duration_s);
        pc.policy = p;
        break;
      }
      case PolicyKind::Corrective:
        pc.policy = CorrectivePolicy{};
        break;
    }
    if (pc.name.empty()) pc.name = type;
    if (const Json* b = pr.find("breakdown")) {
      Reader br(*b, pr.at("breakdown"));
      br.read("fail_limit_kpa", pc.breakdown.fail_limit_kpa);
      br.read("grace_s", pc.breakdown.grace_s);
      br.read("repair_duration_s", pc.breakdown.repair_duration_s);
      br.finish();
    }
    pr.finish();
    sc.policies.push_back(std::move(pc));
  }
  r.finish();
  if (sc.policies.size() < 2) throw ValidationError(r.at("policies") + ": at least two policies are required");
  return sc;
}

Json to_json(const ComparisonReport& report) {
  Json outcomes = Json::array();
  for (const auto& o : report.outcomes) {
    outcomes.push_back({{"policy_name", o.policy_name},
                        {"kind", policy_kind_name(o.kind)},
                        {"duration_s", o.duration_s},
                        {"uptime_s", o.uptime_s},
                        {"downtime_s", o.downtime_s},
                        {"maintenance_count", o.maintenance_count},
                        {"breakdown_count", o.breakdown_count},
                        {"revenue_units", o.revenue_units},
                        {"maintenance_starts", o.maintenance_starts},
                        {"breakdown_starts", o.breakdown_starts}});
  }
  Json deltas = Json::array();
  for (const auto& d : report.deltas) {
    deltas.push_back({{"policy_name", d.policy_name},
                      {"downtime_avoided_s", d.downtime_avoided_s},
                      {"maintenance_avoided", d.maintenance_avoided},
                      {"revenue_delta", d.revenue_delta}});
  }
  return {{"schema_version", kSchemaVersion},
          {"economics",
           {{"revenue_rate_per_s", report.econ.revenue_rate_per_s},
            {"unit_maintenance_cost", report.econ.unit_maintenance_cost}}},
          {"outcomes", std::move(outcomes)},
          {"deltas", std::move(deltas)}};
}

ComparisonReport comparison_from_json(const Json& j, const std::string& where) {
  check_schema(j, where);
  Reader r(j, where);
  ComparisonReport rep;
  {
    Reader er(r.require("economics"), r.at("economics"));
    er.read("revenue_rate_per_s", rep.econ.revenue_rate_per_s);
    er.read("unit_maintenance_cost", rep.econ.unit_maintenance_cost);
    er.finish();
  }
  const Json& outs = r.require("outcomes");
  if (!outs.is_array()) throw ValidationError(r.at("outcomes") + ": expected an array");
  for (std::size_t i = 0; i < outs.size(); ++i) {
    Reader o(outs[i], r.at("outcomes") + "[" + std::to_string(i) + "]");
    SimOutcome s;
    o.read("policy_name", s.policy_name);
    std::string kind;
    o.read("kind", kind);
    s.kind = parse_policy_kind(kind, o.at("kind"));
    o.read("duration_s", s.duration_s);
    o.read("uptime_s", s.uptime_s);
    o.read("downtime_s", s.downtime_s);
    o.read("maintenance_count", s.maintenance_count);
    o.read("breakdown_count", s.breakdown_count);
    o.read("revenue_units", s.revenue_units);
    if (const Json* v = o.find("maintenance_starts")) s.maintenance_starts = sizes_from(*v, o.at("maintenance_starts"));
    if (const Json* v = o.find("breakdown_starts")) s.breakdown_starts = sizes_from(*v, o.at("breakdown_starts"));
    o.finish();
    if (s.uptime_s + s.downtime_s != s.duration_s) {
      throw ValidationError(o.where() + ": uptime_s + downtime_s must equal duration_s");
    }
    rep.outcomes.push_back(std::move(s));
  }
  if (const Json* ds = r.find("deltas")) {
    if (!ds->is_array()) throw ValidationError(r.at("deltas") + ": expected an array");
    for (std::size_t i = 0; i < ds->size(); ++i) {
      Reader d((*ds)[i], r.at("deltas") + "[" + std::to_string(i) + "]");
      PolicyDelta pd;
      d.read("policy_name", pd.policy_name);
      if (const Json* v = d.find("downtime_avoided_s")) pd.downtime_avoided_s = v->get<long long>();
      if (const Json* v = d.find("maintenance_avoided")) pd.maintenance_avoided = v->get<long long>();
      d.read("revenue_delta", pd.revenue_delta);
      d.finish();
      rep.deltas.push_back(std::move(pd));
    }
  }
  r.finish();
  return rep;
}

std::string comparison_csv(const ComparisonReport& report) {
  std::string out =
      "policy,kind,duration_s,uptime_s,downtime_s,maintenance_count,breakdown_count,revenue_units,"
      "downtime_avoided_s,maintenance_avoided,revenue_delta\n";
  for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
    const auto& o = report.outcomes[i];
    const auto& d = report.deltas.at(i);
    out += csv_text(o.policy_name) + "," + std::string(policy_kind_name(o.kind)) + "," + std::to_string(o.duration_s) +
           "," + std::to_string(o.uptime_s) + "," + std::to_string(o.downtime_s) + "," +
           std::to_string(o.maintenance_count) + "," + std::to_string(o.breakdown_count) + "," +
           format_double(o.revenue_units) + "," + std::to_string(d.downtime_avoided_s) + "," +
           std::to_string(d.maintenance_avoided) + "," + format_double(d.revenue_delta) + "\n";
  }
  return out;
}

// --- cost-benefit ---------------------------------------------------------

cba::McConfig mc_config_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  cba::McConfig c;
  r.read("trials", c.trials);
  r.read("n_threads", c.n_threads);
  r.finish();
  with_context(where, [&] { c.validate(); return 0; });
  return c;
}

Json to_json(const cba::McSummary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"max", s.max}, {"min", s.min}, {"p5", s.p5}, {"p50", s.p50}, {"p95", s.p95}};
}

Json to_json(const cba::LineItem& item) {
  return {{"name", item.name},
          {"ledger", cba::ledger_name(item.ledger)},
          {"category", item.category},
          {"kind", cba::item_kind_name(item.kind)},
          {"amount", amount_json(item.amount)},
          {"assumptions", item.assumptions}};
}

Json to_json(const cba::NetBenefitResult& result, std::span<const cba::LineItem> ledger) {
  Json items = Json::array();
  for (std::size_t i = 0; i < result.items.size(); ++i) {
    Json item = i < ledger.size() ? to_json(ledger[i]) : Json{{"name", result.items[i].name}};
    item["summary"] = to_json(result.items[i].summary);
    items.push_back(std::move(item));
  }
  return {{"schema_version", kSchemaVersion},
          {"trials", result.trials},
          {"seed", result.seed},
          {"items", std::move(items)},
          {"totals",
           {{"implementation_cost", to_json(result.implementation)},
            {"direct_saving", to_json(result.direct)},
            {"indirect_saving", to_json(result.indirect)},
            {"net_benefit", to_json(result.net)}}},
          {"samples",
           {{"implementation_cost", result.implementation_samples},
            {"direct_saving", result.direct_samples},
            {"indirect_saving", result.indirect_samples},
            {"net_benefit", result.net_samples}}}};
}

std::string net_benefit_csv(const cba::NetBenefitResult& result) {
  std::string out = "item,ledger,mean,sd,max,min,p5,p50,p95\n";
  auto row = [&](const std::string& name, std::string_view ledger, const cba::McSummary& s) {
    out += csv_text(name) + "," + std::string(ledger) + "," + format_double(s.mean) + "," + format_double(s.sd) + "," +
           format_double(s.max) + "," + format_double(s.min) + "," + format_double(s.p5) + "," + format_double(s.p50) +
           "," + format_double(s.p95) + "\n";
  };
  for (const auto& item : result.items) row(item.name, cba::ledger_name(item.ledger), item.summary);
  row("Total cost of implementation", "implementation_cost", result.implementation);
  row("Total direct cost savings", "direct_saving", result.direct);
  row("Total indirect cost savings", "indirect_saving", result.indirect);
  row("Net benefit (cost)", "net", result.net);
  return out;
}

}  // namespace pdm::io
